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
#include "lrd/model.hpp"
#include "lrd/objective.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lrd {

enum class Variant { Full, NoLlm, NoKge, NoLrd };

Variant parse_variant(std::string_view s);
std::string_view to_string(Variant v);

struct TrainConfig {
  ModelConfig model;
  Real lr = 1e-3;
  Real l2 = 1e-6;
  std::size_t batch_size = 256;
  LossWeights weights;
  std::size_t patience = 10;
  std::size_t max_epochs = 200;
  std::uint64_t seed = 1;
  // KGE triplets drawn per batch; 0 -> batch_size.
  std::size_t kge_per_batch = 0;
  // Corrupt both endpoints of a KGE triplet instead of one at random.
  bool corrupt_both = false;
  bool freeze_projection = false;
  Variant variant = Variant::Full;

  void validate() const;
};

TrainConfig apply_ablation(TrainConfig config, Variant variant);

struct GradientResult {
  LossBreakdown loss;
  ParamStore grads;
};

// Exact gradients of joint_loss for every tensor. Throws Error(Numeric)
// naming the tensor and flat index of the first non-finite partial.
GradientResult compute_gradients(const Batch& batch, const ParamStore& params, const EmbeddingTable* text,
                                 const ModelConfig& config, const LossWeights& weights);

struct AdamOptions {
  Real lr = 1e-3;
  Real l2 = 0;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real eps = 1e-8;
  std::set<std::string, std::less<>> frozen;  // tensor names left untouched
};

struct OptimState {
  ParamStore m;
  ParamStore v;
  std::uint64_t step = 0;

  static OptimState for_params(const ParamStore& params);
};

// Classic Adam with the L2 term added to the gradient before the moments.
void adam_step(ParamStore& params, const ParamStore& grads, OptimState& state, const AdamOptions& options);

// Stops once `patience` consecutive updates fail to beat the best value.
class EarlyStopper {
 public:
  explicit EarlyStopper(std::size_t patience) : patience_(patience) {}

  // Returns true when `metric` is a new best.
  bool update(Real metric);
  bool should_stop() const { return since_best_ >= patience_; }
  Real best() const { return best_; }
  std::size_t best_index() const { return best_index_; }

 private:
  std::size_t patience_;
  std::size_t seen_ = 0;
  std::size_t since_best_ = 0;
  std::size_t best_index_ = 0;
  Real best_ = -std::numeric_limits<Real>::infinity();
};

struct TrainingExample {
  std::size_t split_index;  // into Dataset::split.users
  std::size_t position;     // target index in the train prefix, >= 1
};

std::vector<TrainingExample> enumerate_training_examples(const Dataset& data);

// Samples every negative an example needs and slices its history window.
Batch make_batch(const Dataset& data, std::span<const TrainingExample> examples,
                 const std::vector<ItemSet>& train_sets, const TrainConfig& config, Rng& rng);

struct EpochLog {
  std::size_t epoch = 0;
  LossBreakdown loss;  // means over batches
  Real valid_ndcg5 = 0;
  Real valid_hr5 = 0;
  double seconds = 0;
};

std::string to_json_line(const EpochLog& log);

struct TrainResult {
  ParamStore best;
  ParamStore last;  // parameters after the final completed epoch
  std::size_t best_epoch = 0;
  Real best_valid_ndcg5 = 0;
  std::vector<EpochLog> log;
  bool diverged = false;
};

using EpochCallback = std::function<void(const EpochLog&)>;

TrainResult train(const Dataset& data, const EmbeddingTable* text, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

}  // namespace lrd
