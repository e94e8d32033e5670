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

#include "lrd/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace lrd {

namespace {

// Accumulates d(loss)/d(params) given d(loss)/d(φ(head, r, tail)) = g.
void backprop_phi(ItemId head, RelationId r, ItemId tail, Real g, const ParamStore& p, ParamStore& grad) {
  const Eigen::Index d = p.item.cols();
  const Real* vh = p.item.data() + head * d;
  const Real* vt = p.item.data() + tail * d;
  const Real* rel = p.relation.data() + r * d;
  Real* gh = grad.item.data() + head * d;
  Real* gt = grad.item.data() + tail * d;
  Real* gr = grad.relation.data() + r * d;
  for (Eigen::Index k = 0; k < d; ++k) {
    gh[k] += g * rel[k] * vt[k];
    gt[k] += g * rel[k] * vh[k];
    gr[k] += g * vh[k] * vt[k];
  }
}

// Backpropagates g = d(loss)/d(score) through one traced preference score.
void backprop_score(UserId user, std::span<const ItemId> history, ItemId target, const ScoreTrace& t, Real g,
                    AggMode mode, const ParamStore& p, ParamStore& grad) {
  const Eigen::Index d = p.item.cols(), nr = p.relation.rows(), n = static_cast<Eigen::Index>(history.size());
  const Real* vt = p.item.data() + target * d;
  const Real* u = p.user.data() + user * d;
  Real* gu = grad.user.data() + user * d;
  Real* gvt = grad.item.data() + target * d;
  for (Eigen::Index k = 0; k < d; ++k) {
    gu[k] += g * vt[k];
    gvt[k] += g * (u[k] + t.m[k]);
  }
  grad.item_bias[target] += g;

  // d(loss)/d(s_r), one row per relation.
  Matrix ds(nr, d);
  const Vector dm = g * Eigen::Map<const Vector>(vt, d);
  if (mode == AggMode::Mean) {
    for (Eigen::Index r = 0; r < nr; ++r) ds.row(r) = t.agg.weights[r] * dm.transpose();
  } else {
    const Vector& beta = t.agg.weights;
    const Vector dbeta = t.reprs * dm;
    const Real mean = beta.dot(dbeta);
    const Vector da = beta.array() * (dbeta.array() - mean);
    for (Eigen::Index r = 0; r < nr; ++r) {
      const auto h = t.att_hidden.row(r);
      grad.att_vector += da[r] * h.transpose();
      const Vector dpre = da[r] * (p.att_vector.array() * (1.0 - h.transpose().array().square()));
      grad.att_weight.noalias() += dpre * t.reprs.row(r);
      ds.row(r) = beta[r] * dm.transpose() + (p.att_weight.transpose() * dpre).transpose();
    }
  }

  // s_r = Σ_h w_rh v_h with w_r = softmax_h(φ(h, r, target)).
  const Matrix& hv = t.history_vecs;
  const Matrix& w = t.intensity;
  const Matrix dw = ds * hv.transpose();
  Matrix dh = w.transpose() * ds;
  const Vector centre = (w.array() * dw.array()).rowwise().sum();
  const Matrix dphi = w.array() * (dw.colwise() - centre).array();
  const Matrix z = p.relation.array().rowwise() * Eigen::Map<const Eigen::RowVectorXd>(vt, d).array();
  dh.noalias() += dphi.transpose() * z;
  for (Eigen::Index h = 0; h < n; ++h) grad.item.row(history[static_cast<std::size_t>(h)]) += dh.row(h);
  const Matrix dz = dphi * hv;
  grad.relation.array() += dz.array().rowwise() * Eigen::Map<const Eigen::RowVectorXd>(vt, d).array();
  Eigen::Map<Eigen::RowVectorXd>(gvt, d).array() += (dz.array() * p.relation.array()).colwise().sum();
}

Real phi(ItemId a, RelationId r, ItemId b, const ParamStore& p) {
  const Eigen::Index d = p.item.cols();
  const Real* va = p.item.data() + a * d;
  const Real* vb = p.item.data() + b * d;
  const Real* rel = p.relation.data() + r * d;
  Real s = 0;
  for (Eigen::Index k = 0; k < d; ++k) s += va[k] * rel[k] * vb[k];
  return s;
}

void check_finite(const ParamStore& grads) {
  for (const auto& t : const_cast<ParamStore&>(grads).views()) {
    const auto values = t.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw Error(ErrorKind::Numeric, "non-finite gradient in tensor '" + std::string(t.name) + "' at index " +
                                            std::to_string(i));
      }
    }
  }
}

}  // namespace

GradientResult compute_gradients(const Batch& batch, const ParamStore& params, const EmbeddingTable* text,
                                 const ModelConfig& config, const LossWeights& weights) {
  GradientResult out{LossBreakdown{}, params.zeros_like()};
  ParamStore& grad = out.grads;
  LossBreakdown& loss = out.loss;

  if (!batch.rec.empty()) {
    const Real scale = 1.0 / static_cast<Real>(batch.rec.size());
    for (const auto& ex : batch.rec) {
      const ScoreTrace pos = trace_score(ex.user, ex.history, ex.target, params, config.agg);
      const ScoreTrace neg = trace_score(ex.user, ex.history, ex.negative, params, config.agg);
      const Real x = pos.score - neg.score;
      loss.l_rec += softplus(-x);
      const Real g = sigmoid(-x) * scale;
      backprop_score(ex.user, ex.history, ex.target, pos, -g, config.agg, params, grad);
      backprop_score(ex.user, ex.history, ex.negative, neg, g, config.agg, params, grad);
    }
    loss.l_rec *= scale;
  }

  if (weights.gamma > 0 && !batch.kge.empty()) {
    const Real scale = weights.gamma / static_cast<Real>(batch.kge.size());
    for (const auto& kg : batch.kge) {
      const auto& a = kg.positive;
      const auto& c = kg.corrupted;
      const Real x = phi(a.head, a.relation, a.tail, params) - phi(c.head, c.relation, c.tail, params);
      loss.l_kge += softplus(-x);
      const Real g = sigmoid(-x) * scale;
      backprop_phi(a.head, a.relation, a.tail, -g, params, grad);
      backprop_phi(c.head, c.relation, c.tail, g, params, grad);
    }
    loss.l_kge /= static_cast<Real>(batch.kge.size());
  }

  if (weights.lambda > 0) {
    std::vector<ItemId> items;
    std::size_t pairs = 0;
    for (const auto& ex : batch.rec) {
      if (ex.lrd_negatives.size() != ex.history.size()) {
        throw Error(ErrorKind::Validation, "compute_gradients: one LRD negative per history item required");
      }
      items.insert(items.end(), ex.history.begin(), ex.history.end());
      items.push_back(ex.target);
      pairs += ex.history.size();
    }
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    std::unordered_map<ItemId, Eigen::Index> row_of;
    for (std::size_t i = 0; i < items.size(); ++i) row_of[items[i]] = static_cast<Eigen::Index>(i);

    if (pairs > 0) {
      const Matrix e = posterior_inputs(items, text, params, config.posterior_from_ids);
      const Eigen::Index d = params.item.cols(), nr = params.relation.rows();
      const Real scale = weights.lambda / static_cast<Real>(pairs);
      const auto w_top = params.cls_weight.topRows(d);
      const auto w_bottom = params.cls_weight.bottomRows(d);
      // Classifier logits split into a head part and a tail part per distinct item.
      const Matrix head_logits = e * w_top;
      const Matrix tail_logits = e * w_bottom;
      Matrix d_head = Matrix::Zero(e.rows(), nr), d_tail = Matrix::Zero(e.rows(), nr);

      Matrix z(nr, d), dz(nr, d), hv, nv, phi_pos, phi_neg, g_pos, g_neg;
      Vector logits(nr), q(nr), log_q(nr), recon(nr), dq(nr), dlogits(nr);
      for (const auto& ex : batch.rec) {
        const Eigen::Index n = static_cast<Eigen::Index>(ex.history.size());
        if (n == 0) continue;
        const Eigen::Index jt = row_of.at(ex.target);
        const auto vt = params.item.row(ex.target);
        z = params.relation.array().rowwise() * vt.array();
        hv.resize(n, d);
        nv.resize(n, d);
        for (Eigen::Index k = 0; k < n; ++k) {
          hv.row(k) = params.item.row(ex.history[static_cast<std::size_t>(k)]);
          nv.row(k) = params.item.row(ex.lrd_negatives[static_cast<std::size_t>(k)]);
        }
        phi_pos.noalias() = hv * z.transpose();  // n x |R|
        phi_neg.noalias() = nv * z.transpose();
        g_pos.resize(n, nr);
        g_neg.resize(n, nr);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Eigen::Index jh = row_of.at(ex.history[static_cast<std::size_t>(k)]);
          logits = head_logits.row(jh).transpose() + tail_logits.row(jt).transpose() + params.cls_bias;
          q = logits;
          const Real lse = softmax_inplace(q.data(), nr);
          log_q = logits.array() - lse;
          const Real h = -q.dot(log_q);
          for (Eigen::Index r = 0; r < nr; ++r) {
            const Real fp = phi_pos(k, r), fn = phi_neg(k, r);
            recon[r] = log_sigmoid(fp) + log_sigmoid(-fn);
            // Reconstruction path.
            g_pos(k, r) = -q[r] * sigmoid(-fp) * scale;
            g_neg(k, r) = q[r] * sigmoid(fn) * scale;
          }
          loss.l_lrd += -q.dot(recon) - weights.alpha * h;
          loss.mean_entropy += h;
          // Posterior path: dL/dq_r = -recon_r + α (ln q_r + 1).
          dq = -recon + weights.alpha * (log_q.array() + 1.0).matrix();
          const Real centre = q.dot(dq);
          dlogits = scale * (q.array() * (dq.array() - centre)).matrix();
          grad.cls_bias += dlogits;
          d_head.row(jh) += dlogits.transpose();
          d_tail.row(jt) += dlogits.transpose();
        }
        // φ(h, r, t) = hv_h · z_r with z_r = rel_r ⊙ v_t.
        const Matrix dh = g_pos * z, dn = g_neg * z;
        for (Eigen::Index k = 0; k < n; ++k) {
          grad.item.row(ex.history[static_cast<std::size_t>(k)]) += dh.row(k);
          grad.item.row(ex.lrd_negatives[static_cast<std::size_t>(k)]) += dn.row(k);
        }
        dz.noalias() = g_pos.transpose() * hv;
        dz.noalias() += g_neg.transpose() * nv;
        grad.relation.array() += dz.array().rowwise() * vt.array();
        grad.item.row(ex.target).array() += (dz.array() * params.relation.array()).colwise().sum();
      }
      loss.l_lrd /= static_cast<Real>(pairs);
      loss.mean_entropy /= static_cast<Real>(pairs);

      grad.cls_weight.topRows(d).noalias() += e.transpose() * d_head;
      grad.cls_weight.bottomRows(d).noalias() += e.transpose() * d_tail;
      Matrix de = d_head * w_top.transpose();
      de.noalias() += d_tail * w_bottom.transpose();
      if (config.posterior_from_ids) {
        for (std::size_t i = 0; i < items.size(); ++i) grad.item.row(items[i]) += de.row(static_cast<Eigen::Index>(i));
      } else {
        Matrix raw(static_cast<Eigen::Index>(items.size()), text->dim());
        for (std::size_t i = 0; i < items.size(); ++i) raw.row(static_cast<Eigen::Index>(i)) = text->vectors.row(items[i]);
        grad.projection.weight.noalias() += raw.transpose() * de;
        grad.projection.bias += de.colwise().sum().transpose();
      }
    }
  }

  loss.total = loss.l_rec + weights.gamma * loss.l_kge + weights.lambda * loss.l_lrd;
  if (!std::isfinite(loss.total)) throw Error(ErrorKind::Numeric, "non-finite loss");
  check_finite(grad);
  return out;
}

}  // namespace lrd
