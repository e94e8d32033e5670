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

#include "lrd/model.hpp"

#include <cmath>

namespace lrd {

AggMode parse_agg_mode(std::string_view s) {
  if (s == "mean") return AggMode::Mean;
  if (s == "attention") return AggMode::Attention;
  throw Error(ErrorKind::Validation, "agg: expected 'mean' or 'attention', got '" + std::string(s) + "'");
}

std::string_view to_string(AggMode mode) { return mode == AggMode::Mean ? "mean" : "attention"; }

void ModelConfig::validate(bool require_relations) const {
  if (dim < 1) throw Error(ErrorKind::Validation, "d must be >= 1");
  if (text_dim < 1) throw Error(ErrorKind::Validation, "d_text must be >= 1");
  if (num_predefined < 0 || num_latent < 0) throw Error(ErrorKind::Validation, "num_latent must be >= 0");
  if (require_relations && num_relations() < 1) throw Error(ErrorKind::Validation, "model needs at least one relation");
  if (max_len < 1) throw Error(ErrorKind::Validation, "max_len must be >= 1");
  if (attention_dim < 0) throw Error(ErrorKind::Validation, "attention_dim must be >= 0");
}

namespace {

void fill_normal(Matrix& m, Real stddev, Rng& rng) {
  std::normal_distribution<Real> normal(0.0, stddev);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
}

template <typename M>
void fill_uniform(M& m, Real bound, Rng& rng) {
  std::uniform_real_distribution<Real> uniform(-bound, bound);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng);
}

}  // namespace

ParamStore ParamStore::init(const ModelConfig& config, UserId num_users, ItemId num_items, Rng& rng) {
  config.validate();
  const int d = config.dim, nr = config.num_relations();
  const int da = config.attention_dim > 0 ? config.attention_dim : d;
  ParamStore p;
  p.user.resize(num_users, d);
  p.item.resize(num_items, d);
  p.relation.resize(nr, d);
  fill_normal(p.user, 0.01, rng);
  fill_normal(p.item, 0.01, rng);
  fill_normal(p.relation, config.relation_init_std, rng);
  p.item_bias = Vector::Zero(num_items);

  const Real proj_bound = std::sqrt(6.0 / (config.text_dim + d));
  p.projection.weight.resize(config.text_dim, d);
  p.projection.bias.resize(d);
  fill_uniform(p.projection.weight, proj_bound, rng);
  fill_uniform(p.projection.bias, proj_bound, rng);

  p.cls_weight.resize(2 * d, nr);
  fill_uniform(p.cls_weight, std::sqrt(6.0 / (2 * d + nr)), rng);
  p.cls_bias = Vector::Zero(nr);

  if (config.agg == AggMode::Attention) {
    p.att_weight.resize(da, d);
    p.att_vector.resize(da);
    fill_uniform(p.att_weight, std::sqrt(6.0 / (d + da)), rng);
    fill_uniform(p.att_vector, std::sqrt(6.0 / (da + 1)), rng);
  } else {
    p.att_weight.resize(0, d);
    p.att_vector.resize(0);
  }
  return p;
}

ParamStore ParamStore::zeros_like() const {
  ParamStore z;
  z.user = Matrix::Zero(user.rows(), user.cols());
  z.item = Matrix::Zero(item.rows(), item.cols());
  z.item_bias = Vector::Zero(item_bias.size());
  z.relation = Matrix::Zero(relation.rows(), relation.cols());
  z.projection.weight = Matrix::Zero(projection.weight.rows(), projection.weight.cols());
  z.projection.bias = Vector::Zero(projection.bias.size());
  z.cls_weight = Matrix::Zero(cls_weight.rows(), cls_weight.cols());
  z.cls_bias = Vector::Zero(cls_bias.size());
  z.att_weight = Matrix::Zero(att_weight.rows(), att_weight.cols());
  z.att_vector = Vector::Zero(att_vector.size());
  return z;
}

std::vector<TensorView> ParamStore::views() {
  auto mat = [](std::string_view name, Matrix& m) { return TensorView{name, m.data(), m.rows(), m.cols()}; };
  auto vec = [](std::string_view name, Vector& v) { return TensorView{name, v.data(), v.size(), 1}; };
  return {mat("user", user),
          mat("item", item),
          vec("item_bias", item_bias),
          mat("relation", relation),
          mat("proj_weight", projection.weight),
          vec("proj_bias", projection.bias),
          mat("cls_weight", cls_weight),
          vec("cls_bias", cls_bias),
          mat("att_weight", att_weight),
          vec("att_vector", att_vector)};
}

void ParamStore::for_each(const std::function<void(const TensorView&)>& fn) const {
  for (const auto& v : const_cast<ParamStore*>(this)->views()) fn(v);
}

bool ParamStore::all_finite() const {
  bool ok = true;
  for_each([&](const TensorView& t) {
    for (Real x : t.values()) ok = ok && std::isfinite(x);
  });
  return ok;
}

Real distmult(std::span<const Real> a, std::span<const Real> r, std::span<const Real> b) {
  if (a.size() != r.size() || b.size() != r.size()) {
    throw Error(ErrorKind::Validation, "distmult: dimension mismatch");
  }
  // (a ⊙ b) first: exactly symmetric in the two item arguments.
  Real s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] * b[k]) * r[k];
  return s;
}

RelationPosterior relation_posterior(std::span<const Real> e_i, std::span<const Real> e_j,
                                     const ParamStore& params) {
  const Eigen::Index d = static_cast<Eigen::Index>(e_i.size());
  if (static_cast<Eigen::Index>(e_j.size()) != d || params.cls_weight.rows() != 2 * d) {
    throw Error(ErrorKind::Validation, "relation_posterior: input dimension mismatch");
  }
  Eigen::Map<const Eigen::Matrix<Real, 1, Eigen::Dynamic>> a(e_i.data(), d), b(e_j.data(), d);
  if (!a.allFinite() || !b.allFinite()) throw Error(ErrorKind::Numeric, "relation_posterior: non-finite input");
  RelationPosterior q;
  q.logits = (a * params.cls_weight.topRows(d) + b * params.cls_weight.bottomRows(d)).transpose() +
             params.cls_bias;
  q.probs = q.logits;
  const Real lse = softmax_inplace(q.probs.data(), q.probs.size());
  q.log_probs = q.logits.array() - lse;
  return q;
}

Vector relation_intensity(std::span<const ItemId> history, ItemId target, RelationId r,
                          const ParamStore& params) {
  if (history.empty()) throw Error(ErrorKind::Validation, "relation_intensity: empty history");
  Vector w(static_cast<Eigen::Index>(history.size()));
  const auto rel = row_span(params.relation, r);
  const auto tgt = row_span(params.item, target);
  for (std::size_t k = 0; k < history.size(); ++k) {
    w[static_cast<Eigen::Index>(k)] = distmult(row_span(params.item, history[k]), rel, tgt);
  }
  softmax_inplace(w.data(), w.size());
  return w;
}

Vector relation_sequence_repr(std::span<const ItemId> history, ItemId target, RelationId r,
                              const ParamStore& params) {
  const Vector w = relation_intensity(history, target, r, params);
  Vector s = Vector::Zero(params.item.cols());
  for (std::size_t k = 0; k < history.size(); ++k) {
    s += w[static_cast<Eigen::Index>(k)] * params.item.row(history[k]).transpose();
  }
  return s;
}

namespace {

AggregateResult aggregate_impl(const Matrix& reprs, AggMode mode, const ParamStore& params,
                               Matrix* hidden_out) {
  if (reprs.rows() == 0) throw Error(ErrorKind::Validation, "aggregate: no relation representations");
  AggregateResult out;
  const Eigen::Index nr = reprs.rows();
  if (mode == AggMode::Mean) {
    out.weights = Vector::Constant(nr, 1.0 / static_cast<Real>(nr));
  } else {
    if (params.att_weight.rows() == 0) {
      throw Error(ErrorKind::Validation, "aggregate: attention parameters missing");
    }
    Matrix hidden = (reprs * params.att_weight.transpose()).array().tanh();
    out.weights = hidden * params.att_vector;
    softmax_inplace(out.weights.data(), nr);
    if (hidden_out) *hidden_out = std::move(hidden);
  }
  out.output = reprs.transpose() * out.weights;
  return out;
}

}  // namespace

AggregateResult aggregate(const Matrix& reprs, AggMode mode, const ParamStore& params) {
  return aggregate_impl(reprs, mode, params, nullptr);
}

ScoreTrace trace_score(UserId user, std::span<const ItemId> history, ItemId target,
                       const ParamStore& params, AggMode mode) {
  if (history.empty()) throw Error(ErrorKind::Validation, "preference score needs a non-empty history");
  const Eigen::Index nr = params.relation.rows(), n = static_cast<Eigen::Index>(history.size());
  const Eigen::Index d = params.item.cols();
  ScoreTrace t;
  t.history_vecs.resize(n, d);
  for (Eigen::Index h = 0; h < n; ++h) t.history_vecs.row(h) = params.item.row(history[static_cast<std::size_t>(h)]);
  // φ(h, r, target) = v_h · (rel_r ⊙ v_target).
  const Matrix z = params.relation.array().rowwise() * params.item.row(target).array();
  t.phi.noalias() = z * t.history_vecs.transpose();
  t.intensity = t.phi;
  for (Eigen::Index r = 0; r < nr; ++r) softmax_inplace(t.intensity.data() + r * n, n);
  t.reprs.noalias() = t.intensity * t.history_vecs;
  t.agg = aggregate_impl(t.reprs, mode, params, &t.att_hidden);
  t.m = t.agg.output;
  t.score = (params.user.row(user) + t.m.transpose()).dot(params.item.row(target)) + params.item_bias[target];
  return t;
}

Real preference_score(UserId user, std::span<const ItemId> history, ItemId target,
                      const ParamStore& params, AggMode mode) {
  return trace_score(user, history, target, params, mode).score;
}

Matrix posterior_inputs(std::span<const ItemId> items, const EmbeddingTable* text,
                        const ParamStore& params, bool from_ids) {
  const Eigen::Index d = params.item.cols();
  Matrix out(static_cast<Eigen::Index>(items.size()), d);
  if (from_ids) {
    for (std::size_t i = 0; i < items.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = params.item.row(items[i]);
    return out;
  }
  if (!text) throw Error(ErrorKind::Validation, "text embeddings required unless the classifier reads item IDs");
  if (text->dim() != params.projection.weight.rows()) {
    throw Error(ErrorKind::Validation, "text embedding dimension " + std::to_string(text->dim()) +
                                           " does not match projection input " +
                                           std::to_string(params.projection.weight.rows()));
  }
  Matrix raw(static_cast<Eigen::Index>(items.size()), text->dim());
  for (std::size_t i = 0; i < items.size(); ++i) raw.row(static_cast<Eigen::Index>(i)) = text->vectors.row(items[i]);
  out.noalias() = raw * params.projection.weight;
  out.rowwise() += params.projection.bias.transpose();
  return out;
}

}  // namespace lrd
