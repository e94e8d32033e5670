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

#include "lrd/common.hpp"
#include "lrd/textembed.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lrd {

enum class AggMode { Mean, Attention };

AggMode parse_agg_mode(std::string_view s);
std::string_view to_string(AggMode mode);

struct ModelConfig {
  int dim = 64;
  int text_dim = 1536;
  int num_predefined = 0;
  int num_latent = 6;
  AggMode agg = AggMode::Mean;
  int attention_dim = 0;  // 0 -> dim
  std::size_t max_len = 20;
  // The relation classifier reads item ID embeddings instead of projected
  // text vectors.
  bool posterior_from_ids = false;
  // Standard deviation of the initial relation embeddings.
  Real relation_init_std = 0.01;

  int num_relations() const { return num_predefined + num_latent; }
  // The relation count is only known once a dataset is attached.
  void validate(bool require_relations = true) const;
};

// A named, contiguous view over one parameter tensor (vectors have cols == 1).
struct TensorView {
  std::string_view name;
  Real* data;
  Eigen::Index rows;
  Eigen::Index cols;

  Eigen::Index size() const { return rows * cols; }
  std::span<Real> values() const { return {data, static_cast<std::size_t>(size())}; }
};

// Every learnable tensor. Gradients use the same type.
struct ParamStore {
  Matrix user;          // |U| x d
  Matrix item;          // |V| x d
  Vector item_bias;     // |V|
  Matrix relation;      // |R| x d; predefined rows first
  Projection projection;  // d_L x d, d
  Matrix cls_weight;    // 2d x |R|
  Vector cls_bias;      // |R|
  Matrix att_weight;    // d_a x d (attention aggregation only)
  Vector att_vector;    // d_a

  // normal(0, 0.01) embeddings, zero biases, Glorot-uniform dense layers.
  static ParamStore init(const ModelConfig& config, UserId num_users, ItemId num_items, Rng& rng);
  ParamStore zeros_like() const;

  int num_relations() const { return static_cast<int>(relation.rows()); }
  int dim() const { return static_cast<int>(item.cols()); }

  std::vector<TensorView> views();
  void for_each(const std::function<void(const TensorView&)>& fn) const;
  bool all_finite() const;
};

inline std::span<const Real> row_span(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}
inline std::span<const Real> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Σ_k a[k] r[k] b[k].
Real distmult(std::span<const Real> a, std::span<const Real> r, std::span<const Real> b);

struct RelationPosterior {
  Vector logits;
  Vector probs;
  Vector log_probs;
};

// softmax(W2ᵀ [e_i; e_j] + b2) over every relation.
RelationPosterior relation_posterior(std::span<const Real> e_i, std::span<const Real> e_j,
                                     const ParamStore& params);

// Softmax over the history of DistMult(history item, relation, target).
Vector relation_intensity(std::span<const ItemId> history, ItemId target, RelationId r,
                          const ParamStore& params);

// Intensity-weighted sum of history item embeddings.
Vector relation_sequence_repr(std::span<const ItemId> history, ItemId target, RelationId r,
                              const ParamStore& params);

struct AggregateResult {
  Vector output;
  Vector weights;  // per relation: 1/|R| for mean, attention softmax otherwise
};

// `reprs` holds one relation-specific sequence representation per row.
AggregateResult aggregate(const Matrix& reprs, AggMode mode, const ParamStore& params);

// Every intermediate of one preference score, kept for backpropagation and
// case tracing.
struct ScoreTrace {
  Matrix history_vecs;    // |history| x d, item vectors of the history
  Matrix intensity;       // |R| x |history|
  Matrix phi;             // |R| x |history|
  Matrix reprs;           // |R| x d
  AggregateResult agg;
  Matrix att_hidden;      // |R| x d_a, attention mode only
  Vector m;               // d
  Real score = 0;
};

ScoreTrace trace_score(UserId user, std::span<const ItemId> history, ItemId target,
                       const ParamStore& params, AggMode mode);

// (u + m_{u,j}) · v_j + b_j.
Real preference_score(UserId user, std::span<const ItemId> history, ItemId target,
                      const ParamStore& params, AggMode mode);

// Rows of projected text vectors (or ID embeddings) feeding the classifier.
Matrix posterior_inputs(std::span<const ItemId> items, const EmbeddingTable* text,
                        const ParamStore& params, bool from_ids);

// Named tensors: "LRDC", u32 version, u32 count, then per tensor u32 name
// length, name, u32 rows, u32 cols, u32 dtype (0 = f32, 1 = f64), payload.
void save_checkpoint(const ParamStore& params, const std::string& path);
ParamStore load_checkpoint(const std::string& path);

}  // namespace lrd
