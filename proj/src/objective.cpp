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

#include "lrd/objective.hpp"

#include <algorithm>
#include <cmath>

namespace lrd {

namespace {

Real phi(ItemId a, RelationId r, ItemId b, const ParamStore& p) {
  return distmult(row_span(p.item, a), row_span(p.relation, r), row_span(p.item, b));
}

}  // namespace

Real bpr_loss(Real y_pos, Real y_neg) { return softplus(-(y_pos - y_neg)); }

Real entropy(std::span<const Real> probs) {
  Real h = 0;
  for (Real q : probs) {
    if (q > 0) h -= q * std::log(q);
  }
  return h;
}

Real reconstruction_term(ItemId v_i, ItemId v_j, ItemId v_i_neg, RelationId r, const ParamStore& params) {
  return log_sigmoid(phi(v_i, r, v_j, params)) + log_sigmoid(-phi(v_i_neg, r, v_j, params));
}

Real lrd_pair_loss(ItemId v_i, ItemId v_j, ItemId v_i_neg, const RelationPosterior& q,
                   const ParamStore& params, Real alpha) {
  Real expected = 0;
  for (Eigen::Index r = 0; r < q.probs.size(); ++r) {
    expected += q.probs[r] * reconstruction_term(v_i, v_j, v_i_neg, static_cast<RelationId>(r), params);
  }
  return -expected - alpha * entropy(as_span(q.probs));
}

LrdLossResult lrd_loss(const Batch& batch, const ParamStore& params, const EmbeddingTable* text,
                       const ModelConfig& config, Real alpha) {
  LrdLossResult result;
  for (const auto& ex : batch.rec) {
    if (ex.lrd_negatives.size() != ex.history.size()) {
      throw Error(ErrorKind::Validation, "lrd_loss: one negative per history item required");
    }
    const std::vector<ItemId> target{ex.target};
    const Matrix e_target = posterior_inputs(target, text, params, config.posterior_from_ids);
    const Matrix e_hist = posterior_inputs(ex.history, text, params, config.posterior_from_ids);
    for (std::size_t k = 0; k < ex.history.size(); ++k) {
      const auto q = relation_posterior(row_span(e_hist, static_cast<Eigen::Index>(k)), row_span(e_target, 0), params);
      result.loss += lrd_pair_loss(ex.history[k], ex.target, ex.lrd_negatives[k], q, params, alpha);
      result.mean_entropy += entropy(as_span(q.probs));
      ++result.pairs;
    }
  }
  if (result.pairs > 0) {
    result.loss /= static_cast<Real>(result.pairs);
    result.mean_entropy /= static_cast<Real>(result.pairs);
  }
  return result;
}

Real kge_loss(const Triplet& triplet, const Triplet& corrupted, const ParamStore& params) {
  return bpr_loss(phi(triplet.head, triplet.relation, triplet.tail, params),
                  phi(corrupted.head, corrupted.relation, corrupted.tail, params));
}

LossBreakdown joint_loss(const Batch& batch, const ParamStore& params, const EmbeddingTable* text,
                         const ModelConfig& config, const LossWeights& weights) {
  if (weights.gamma < 0 || weights.lambda < 0) {
    throw Error(ErrorKind::Validation, "loss weights must be non-negative");
  }
  LossBreakdown out;
  for (const auto& ex : batch.rec) {
    const Real pos = preference_score(ex.user, ex.history, ex.target, params, config.agg);
    const Real neg = preference_score(ex.user, ex.history, ex.negative, params, config.agg);
    out.l_rec += bpr_loss(pos, neg);
  }
  if (!batch.rec.empty()) out.l_rec /= static_cast<Real>(batch.rec.size());
  if (weights.gamma > 0) {
    for (const auto& kg : batch.kge) out.l_kge += kge_loss(kg.positive, kg.corrupted, params);
    if (!batch.kge.empty()) out.l_kge /= static_cast<Real>(batch.kge.size());
  }
  if (weights.lambda > 0) {
    const auto lrd = lrd_loss(batch, params, text, config, weights.alpha);
    out.l_lrd = lrd.loss;
    out.mean_entropy = lrd.mean_entropy;
  }
  out.total = out.l_rec + weights.gamma * out.l_kge + weights.lambda * out.l_lrd;
  return out;
}

Real item_log_likelihood(ItemId v_i, ItemId v_other, RelationId r, const ParamStore& params) {
  const ItemId n = static_cast<ItemId>(params.item.rows());
  if (n > kElboMaxItems) {
    throw Error(ErrorKind::Validation, "exact item softmax limited to " + std::to_string(kElboMaxItems) + " items");
  }
  std::vector<Real> scores(static_cast<std::size_t>(n));
  for (ItemId c = 0; c < n; ++c) scores[static_cast<std::size_t>(c)] = phi(c, r, v_other, params);
  const Real mx = *std::max_element(scores.begin(), scores.end());
  Real sum = 0;
  for (Real s : scores) sum += std::exp(s - mx);
  return scores[static_cast<std::size_t>(v_i)] - mx - std::log(sum);
}

ElboResult elbo_exact(ItemId v1, ItemId v2, const ParamStore& params, std::span<const Real> q_forward,
                      std::span<const Real> q_backward, Real alpha) {
  const int nr = params.num_relations();
  if (static_cast<int>(q_forward.size()) != nr || static_cast<int>(q_backward.size()) != nr) {
    throw Error(ErrorKind::Validation, "elbo_exact: posterior size must equal |R|");
  }
  const Real log_prior = -std::log(static_cast<Real>(nr));
  ElboResult out;
  const ItemId pair[2] = {v1, v2};
  const std::span<const Real> qs[2] = {q_forward, q_backward};
  for (int i = 0; i < 2; ++i) {
    const ItemId self = pair[i], other = pair[1 - i];
    std::vector<Real> log_p(static_cast<std::size_t>(nr));
    for (int r = 0; r < nr; ++r) log_p[static_cast<std::size_t>(r)] = item_log_likelihood(self, other, r, params);
    Real expected = 0;
    for (int r = 0; r < nr; ++r) {
      const Real q = qs[i][static_cast<std::size_t>(r)];
      if (q > 0) expected += q * log_p[static_cast<std::size_t>(r)];
    }
    const Real h = entropy(qs[i]);
    out.objective += expected + alpha * h;
    out.bound += expected + alpha * h + log_prior;
    const Real mx = *std::max_element(log_p.begin(), log_p.end());
    Real sum = 0;
    for (Real lp : log_p) sum += std::exp(lp - mx);
    out.pseudo_ll += mx + std::log(sum) + log_prior;
  }
  return out;
}

ElboResult elbo_exact(ItemId v1, ItemId v2, const ParamStore& params, const EmbeddingTable* text,
                      const ModelConfig& config, Real alpha) {
  const std::vector<ItemId> items{v1, v2};
  const Matrix e = posterior_inputs(items, text, params, config.posterior_from_ids);
  const auto q_fwd = relation_posterior(row_span(e, 0), row_span(e, 1), params);
  const auto q_bwd = relation_posterior(row_span(e, 1), row_span(e, 0), params);
  return elbo_exact(v1, v2, params, as_span(q_fwd.probs), as_span(q_bwd.probs), alpha);
}

}  // namespace lrd
