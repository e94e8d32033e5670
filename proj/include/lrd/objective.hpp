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

#include <span>
#include <vector>

namespace lrd {

// One (user, position) training example with its sampled negatives.
struct RecExample {
  UserId user = 0;
  std::vector<ItemId> history;        // oldest first, non-empty
  ItemId target = 0;
  ItemId negative = 0;                // BPR negative
  std::vector<ItemId> lrd_negatives;  // one per history item (empty if λ = 0)
};

struct KgeExample {
  Triplet positive;
  Triplet corrupted;
};

// Everything random about one optimization step is drawn up front, so every
// loss below is a pure function of the parameters.
struct Batch {
  std::vector<RecExample> rec;
  std::vector<KgeExample> kge;
};

struct LossWeights {
  Real gamma = 1.0;   // KGE
  Real lambda = 1.0;  // latent relation discovery
  Real alpha = 0.1;   // entropy regularizer
};

struct LossBreakdown {
  Real l_rec = 0;
  Real l_kge = 0;
  Real l_lrd = 0;
  Real total = 0;
  Real mean_entropy = 0;
};

// -log σ(y_pos - y_neg)
Real bpr_loss(Real y_pos, Real y_neg);

// -Σ q ln q with 0 ln 0 = 0.
Real entropy(std::span<const Real> probs);

// log σ(φ(v_i, v_j, r)) + log σ(-φ(v_i⁻, v_j, r)) on ID embeddings.
Real reconstruction_term(ItemId v_i, ItemId v_j, ItemId v_i_neg, RelationId r, const ParamStore& params);

// -Σ_r q_r · reconstruction_r - α H[q] for a single history/target pair.
Real lrd_pair_loss(ItemId v_i, ItemId v_j, ItemId v_i_neg, const RelationPosterior& q,
                   const ParamStore& params, Real alpha);

struct LrdLossResult {
  Real loss = 0;          // mean over pairs
  Real mean_entropy = 0;  // mean posterior entropy over pairs
  std::size_t pairs = 0;
};

// Pairs are (history item, target) for every example in the batch.
LrdLossResult lrd_loss(const Batch& batch, const ParamStore& params, const EmbeddingTable* text,
                       const ModelConfig& config, Real alpha);

// -log σ(φ(true) - φ(corrupted))
Real kge_loss(const Triplet& triplet, const Triplet& corrupted, const ParamStore& params);

LossBreakdown joint_loss(const Batch& batch, const ParamStore& params, const EmbeddingTable* text,
                         const ModelConfig& config, const LossWeights& weights);

// Exact quantities over the full item softmax, for small catalogs only.
struct ElboResult {
  Real objective = 0;   // Σ_i Σ_r q log p(v_i | v_-i, r) + α H[q]
  Real bound = 0;       // objective plus the uniform-prior term Σ_i Σ_r q log(1/|R|)
  Real pseudo_ll = 0;   // Σ_i log Σ_r p(v_i | v_-i, r) / |R|
};

inline constexpr ItemId kElboMaxItems = 4096;

// q for direction i comes from the classifier on [e_i; e_-i].
ElboResult elbo_exact(ItemId v1, ItemId v2, const ParamStore& params, const EmbeddingTable* text,
                      const ModelConfig& config, Real alpha);

// Same, with caller-supplied posteriors for the two directions.
ElboResult elbo_exact(ItemId v1, ItemId v2, const ParamStore& params, std::span<const Real> q_forward,
                      std::span<const Real> q_backward, Real alpha);

// log p(v_i | v_-i, r) under the full softmax over items.
Real item_log_likelihood(ItemId v_i, ItemId v_other, RelationId r, const ParamStore& params);

}  // namespace lrd
