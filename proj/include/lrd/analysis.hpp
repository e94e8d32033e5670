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

#include "lrd/corpus.hpp"
#include "lrd/evaluation.hpp"
#include "lrd/model.hpp"
#include "lrd/trainer.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lrd {

// Pairwise cosine similarity of relation embeddings (|R| x |R|).
Matrix relation_similarity(const ParamStore& params);

using ItemPair = std::pair<ItemId, ItemId>;

struct ScoredPair {
  ItemId head = 0;
  ItemId tail = 0;
  Real score = 0;
};

struct RelationExemplars {
  RelationId relation = 0;
  std::vector<ScoredPair> pairs;  // score descending, then (head, tail) ascending
};

RelationExemplars top_pairs(RelationId relation, std::span<const ItemPair> pool, std::size_t n,
                            const ParamStore& params);

// Distinct (history item, target) pairs inside the training windows.
std::vector<ItemPair> training_window_pairs(const Dataset& data, std::size_t max_len = 20);

// Every ordered pair of distinct items; refuses catalogs above `max_items`.
std::vector<ItemPair> all_item_pairs(ItemId num_items, ItemId max_items = 5000);

struct HistoryRelation {
  ItemId item = 0;
  Vector scores;  // DistMult(item, r, target) for every relation
  RelationId argmax = 0;
};

struct CaseTrace {
  UserId user = 0;
  ItemId target = 0;
  int target_rank = 0;  // 0 when no negatives were supplied
  std::vector<HistoryRelation> history;
};

CaseTrace case_trace(UserId user, std::span<const ItemId> history, ItemId target, const ParamStore& params,
                     AggMode mode, std::span<const ItemId> negatives = {});

// Argmax of the relation posterior for each pair.
std::vector<RelationId> posterior_argmax(std::span<const ItemPair> pairs, const EmbeddingTable* text,
                                         const ParamStore& params, bool from_ids);

// Σ_clusters max_label |cluster ∩ label| / N.
Real cluster_purity(std::span<const int> predicted, std::span<const int> truth);

struct SweepGrid {
  std::vector<int> num_latent;
  std::vector<Real> lambda;
};

// {5..10} x {0.1, 1, 5, 10}.
SweepGrid default_sweep_grid();

struct SweepCell {
  int num_latent = 0;
  Real lambda = 0;
  std::vector<SeedRun> runs;
  Real mean_ndcg5 = 0;
  std::optional<std::string> error;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::map<int, Real> by_num_latent;  // mean over λ of cell means
  std::map<Real, Real> by_lambda;     // mean over num_latent of cell means
};

using CellRunner = std::function<MetricsReport(const TrainConfig&)>;

// Runs every (num_latent, λ, seed). A failing cell is recorded and skipped.
SweepResult sweep(const SweepGrid& grid, const TrainConfig& base, std::span<const std::uint64_t> seeds,
                  const CellRunner& run);

// Recomputes both marginal tables from the cell table.
void compute_marginals(SweepResult& result);

// Trains with `config` and reports `split` metrics of the best checkpoint.
CellRunner make_training_runner(const Dataset& data, const EmbeddingTable* text, EvalSplit split = EvalSplit::Test);

std::string sweep_csv(const SweepResult& result);
std::string similarity_csv(const Matrix& sim, const RelationVocab& vocab);

}  // namespace lrd
