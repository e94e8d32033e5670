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

#include "lrd/evaluation.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace lrd {

Variant parse_variant(std::string_view s) {
  if (s == "full") return Variant::Full;
  if (s == "no_llm") return Variant::NoLlm;
  if (s == "no_kge") return Variant::NoKge;
  if (s == "no_lrd") return Variant::NoLrd;
  throw Error(ErrorKind::Validation, "unknown variant '" + std::string(s) + "' (full|no_llm|no_kge|no_lrd)");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::NoLlm: return "no_llm";
    case Variant::NoKge: return "no_kge";
    case Variant::NoLrd: return "no_lrd";
  }
  return "full";
}

void TrainConfig::validate() const {
  model.validate(false);
  if (!(lr > 0)) throw Error(ErrorKind::Validation, "lr must be > 0");
  if (l2 < 0) throw Error(ErrorKind::Validation, "l2 must be >= 0");
  if (batch_size < 1) throw Error(ErrorKind::Validation, "batch_size must be >= 1");
  if (weights.gamma < 0) throw Error(ErrorKind::Validation, "gamma must be >= 0");
  if (weights.lambda < 0) throw Error(ErrorKind::Validation, "lambda must be >= 0");
  if (weights.alpha < 0) throw Error(ErrorKind::Validation, "alpha must be >= 0");
  if (patience < 1) throw Error(ErrorKind::Validation, "patience must be >= 1");
  if (max_epochs < 1) throw Error(ErrorKind::Validation, "max_epochs must be >= 1");
}

TrainConfig apply_ablation(TrainConfig config, Variant variant) {
  config.variant = variant;
  switch (variant) {
    case Variant::Full:
      break;
    case Variant::NoLlm:
      config.model.posterior_from_ids = true;
      break;
    case Variant::NoKge:
      config.weights.gamma = 0;
      break;
    case Variant::NoLrd:
      config.weights.lambda = 0;
      config.model.num_latent = 0;
      break;
  }
  return config;
}

OptimState OptimState::for_params(const ParamStore& params) {
  return {params.zeros_like(), params.zeros_like(), 0};
}

void adam_step(ParamStore& params, const ParamStore& grads, OptimState& state, const AdamOptions& options) {
  ++state.step;
  const Real t = static_cast<Real>(state.step);
  const Real c1 = 1.0 - std::pow(options.beta1, t);
  const Real c2 = 1.0 - std::pow(options.beta2, t);
  auto pv = params.views();
  auto gv = const_cast<ParamStore&>(grads).views();
  auto mv = state.m.views();
  auto vv = state.v.views();
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (gv[i].size() != pv[i].size() || mv[i].size() != pv[i].size() || vv[i].size() != pv[i].size()) {
      throw Error(ErrorKind::Validation, "adam_step: shape mismatch in '" + std::string(pv[i].name) + "'");
    }
    if (options.frozen.contains(pv[i].name)) continue;
    Real* p = pv[i].data;
    const Real* g = gv[i].data;
    Real* m = mv[i].data;
    Real* v = vv[i].data;
    for (Eigen::Index k = 0; k < pv[i].size(); ++k) {
      const Real grad = g[k] + options.l2 * p[k];
      m[k] = options.beta1 * m[k] + (1.0 - options.beta1) * grad;
      v[k] = options.beta2 * v[k] + (1.0 - options.beta2) * grad * grad;
      const Real step = options.lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + options.eps);
      if (!std::isfinite(step)) {
        throw Error(ErrorKind::Numeric, "non-finite Adam update in '" + std::string(pv[i].name) + "'");
      }
      p[k] -= step;
    }
  }
}

bool EarlyStopper::update(Real metric) {
  const std::size_t index = seen_++;
  if (metric > best_) {
    best_ = metric;
    best_index_ = index;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

std::vector<TrainingExample> enumerate_training_examples(const Dataset& data) {
  std::vector<TrainingExample> out;
  for (std::size_t k = 0; k < data.split.users.size(); ++k) {
    for (std::size_t pos = 1; pos < data.split.users[k].train.size(); ++pos) out.push_back({k, pos});
  }
  return out;
}

namespace {

ItemId other_item(ItemId avoid, ItemId num_items, Rng& rng) {
  std::uniform_int_distribution<ItemId> pick(0, num_items - 1);
  while (true) {
    const ItemId c = pick(rng);
    if (c != avoid || num_items == 1) return c;
  }
}

}  // namespace

Batch make_batch(const Dataset& data, std::span<const TrainingExample> examples,
                 const std::vector<ItemSet>& train_sets, const TrainConfig& config, Rng& rng) {
  Batch batch;
  const ItemId n_items = data.num_items();
  batch.rec.reserve(examples.size());
  for (const auto& ex : examples) {
    const auto& us = data.split.users[ex.split_index];
    const auto window = history_window(us.train, ex.position, config.model.max_len);
    RecExample r;
    r.user = us.user;
    r.history.assign(window.begin(), window.end());
    r.target = us.train[ex.position];
    r.negative = sample_negative_item(train_sets[ex.split_index], n_items, rng);
    if (config.weights.lambda > 0) {
      r.lrd_negatives.reserve(r.history.size());
      for (ItemId h : r.history) r.lrd_negatives.push_back(other_item(h, n_items, rng));
    }
    batch.rec.push_back(std::move(r));
  }
  if (config.weights.gamma > 0 && !data.triplets.empty() && !examples.empty()) {
    const std::size_t per_batch = config.kge_per_batch > 0 ? config.kge_per_batch : config.batch_size;
    const std::size_t count = (per_batch * examples.size() + config.batch_size - 1) / config.batch_size;
    std::uniform_int_distribution<std::size_t> pick(0, data.triplets.size() - 1);
    std::bernoulli_distribution coin(0.5);
    batch.kge.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      KgeExample kg;
      kg.positive = data.triplets[pick(rng)];
      kg.corrupted = kg.positive;
      if (config.corrupt_both) {
        kg.corrupted.head = other_item(kg.positive.head, n_items, rng);
        kg.corrupted.tail = other_item(kg.positive.tail, n_items, rng);
      } else if (coin(rng)) {
        kg.corrupted.head = other_item(kg.positive.head, n_items, rng);
      } else {
        kg.corrupted.tail = other_item(kg.positive.tail, n_items, rng);
      }
      batch.kge.push_back(kg);
    }
  }
  return batch;
}

std::string to_json_line(const EpochLog& log) {
  nlohmann::ordered_json j;
  j["epoch"] = log.epoch;
  j["l_rec"] = log.loss.l_rec;
  j["l_kge"] = log.loss.l_kge;
  j["l_lrd"] = log.loss.l_lrd;
  j["mean_entropy"] = log.loss.mean_entropy;
  j["total"] = log.loss.total;
  j["valid_ndcg@5"] = log.valid_ndcg5;
  j["valid_hr@5"] = log.valid_hr5;
  j["seconds"] = log.seconds;
  return j.dump();
}

TrainResult train(const Dataset& data, const EmbeddingTable* text, const TrainConfig& base,
                  const EpochCallback& on_epoch) {
  TrainConfig config = apply_ablation(base, base.variant);
  config.model.num_predefined = data.relations.num_predefined();
  config.validate();
  config.model.validate();
  const bool needs_text = config.weights.lambda > 0 && !config.model.posterior_from_ids;
  if (needs_text) {
    if (!text) throw Error(ErrorKind::Validation, "training with LRD needs item text embeddings");
    if (text->size() != data.num_items()) {
      throw Error(ErrorKind::Data, "text embeddings cover " + std::to_string(text->size()) + " items, dataset has " +
                                       std::to_string(data.num_items()));
    }
    config.model.text_dim = static_cast<int>(text->dim());
  } else if (text) {
    config.model.text_dim = static_cast<int>(text->dim());
  }

  Rng rng(config.seed);
  ParamStore params = ParamStore::init(config.model, data.num_users(), data.num_items(), rng);
  OptimState state = OptimState::for_params(params);
  AdamOptions adam{.lr = config.lr, .l2 = config.l2, .frozen = {}};
  if (config.freeze_projection) adam.frozen = {"proj_weight", "proj_bias"};

  auto examples = enumerate_training_examples(data);
  std::vector<ItemSet> train_sets;
  train_sets.reserve(data.split.users.size());
  for (const auto& us : data.split.users) train_sets.emplace_back(us.train);

  TrainResult result;
  result.best = params;
  EarlyStopper stopper(config.patience);
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(examples.begin(), examples.end(), rng);
    EpochLog log;
    log.epoch = epoch;
    std::size_t batches = 0;
    try {
      for (std::size_t i = 0; i < examples.size(); i += config.batch_size) {
        const auto n = std::min(config.batch_size, examples.size() - i);
        const Batch batch = make_batch(data, std::span(examples).subspan(i, n), train_sets, config, rng);
        const auto g = compute_gradients(batch, params, text, config.model, config.weights);
        adam_step(params, g.grads, state, adam);
        log.loss.l_rec += g.loss.l_rec;
        log.loss.l_kge += g.loss.l_kge;
        log.loss.l_lrd += g.loss.l_lrd;
        log.loss.mean_entropy += g.loss.mean_entropy;
        log.loss.total += g.loss.total;
        ++batches;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Numeric) throw;
      result.diverged = true;
      break;
    }
    if (batches > 0) {
      const Real nb = static_cast<Real>(batches);
      log.loss.l_rec /= nb;
      log.loss.l_kge /= nb;
      log.loss.l_lrd /= nb;
      log.loss.mean_entropy /= nb;
      log.loss.total /= nb;
    }
    const auto valid = evaluate(data, params, config.model.agg, EvalSplit::Valid, config.model.max_len);
    log.valid_ndcg5 = valid.ndcg5;
    log.valid_hr5 = valid.hr5;
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(log);
    if (stopper.update(valid.ndcg5)) {
      result.best = params;
      result.best_epoch = epoch;
      result.best_valid_ndcg5 = valid.ndcg5;
    }
    if (on_epoch) on_epoch(log);
    if (stopper.should_stop()) break;
  }
  result.last = std::move(params);
  return result;
}

}  // namespace lrd
