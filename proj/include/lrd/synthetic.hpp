// Copyright 2026 The LRD Authors. All rights reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "lrd/analysis.hpp"
#include "lrd/corpus.hpp"

#include <vector>

namespace lrd {

// Every item has a kind (0..K-1, shown in its text through kind-specific
// signature tokens) and K hidden categorical features f_0..f_{K-1}.
// Relation k governs steps out of a kind-k head: the next item shares the
// head's value of f_k and differs from it on every other feature. Users walk
// the catalog, each step obeying the head's relation, so consecutive
// (history, target) pairs are planted-relation instances. What one relation
// rewards (agreement on f_k) another forbids, so a single shared relation
// cannot fit the pairs and the relations are only recoverable as distinct
// relations.
struct PlantedConfig {
  int num_items = 500;
  int num_relations = 4;
  int num_users = 400;
  int seq_len = 20;
  int signature_tokens = 3;  // per kind
  int noise_tokens = 4;      // per item
  int noise_vocab = 300;
  int heldout_pairs = 400;
  int feature_values = 8;
  // History window used for training; held-out pairs avoid every pair seen
  // inside such a window.
  std::size_t window = 1;
  // Adds a predefined relation linking items whose id parity matches; gives
  // the knowledge-graph loss something to fit in fixtures.
  bool parity_relation = false;
  std::size_t eval_negatives = 99;
  std::uint64_t seed = 7;
};

struct PlantedData {
  Dataset data;
  std::vector<int> item_relation;   // kind per dense item id
  std::vector<std::vector<int>> item_features;  // hidden features per dense item id
  std::vector<ItemPair> heldout;    // rule-following pairs absent from training windows
  std::vector<int> heldout_labels;  // planted relation per held-out pair
};

PlantedData make_planted_dataset(const PlantedConfig& config);

// Small planted dataset (60 items, 2 kinds, parity relation) for tests.
PlantedData make_fixture_dataset(std::uint64_t seed = 3);

}  // namespace lrd
