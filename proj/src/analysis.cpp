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

#include "lrd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace lrd {

Matrix relation_similarity(const ParamStore& params) {
  const Eigen::Index nr = params.relation.rows();
  Vector norms(nr);
  for (Eigen::Index r = 0; r < nr; ++r) {
    norms[r] = params.relation.row(r).norm();
    if (!(norms[r] > 0)) {
      throw Error(ErrorKind::Numeric, "relation " + std::to_string(r) + " has a zero-norm embedding");
    }
  }
  Matrix sim(nr, nr);
  for (Eigen::Index a = 0; a < nr; ++a) {
    for (Eigen::Index b = a; b < nr; ++b) {
      const Real c = std::clamp(params.relation.row(a).dot(params.relation.row(b)) / (norms[a] * norms[b]), -1.0, 1.0);
      sim(a, b) = sim(b, a) = c;
    }
  }
  return sim;
}

RelationExemplars top_pairs(RelationId relation, std::span<const ItemPair> pool, std::size_t n,
                            const ParamStore& params) {
  if (pool.empty()) throw Error(ErrorKind::Validation, "top_pairs: empty candidate pool");
  if (relation < 0 || relation >= params.num_relations()) {
    throw Error(ErrorKind::Validation, "top_pairs: relation " + std::to_string(relation) + " out of range");
  }
  RelationExemplars out;
  out.relation = relation;
  out.pairs.reserve(pool.size());
  const auto rel = row_span(params.relation, relation);
  for (const auto& [h, t] : pool) {
    out.pairs.push_back({h, t, distmult(row_span(params.item, h), rel, row_span(params.item, t))});
  }
  const auto better = [](const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.head != b.head) return a.head < b.head;
    return a.tail < b.tail;
  };
  const std::size_t keep = std::min(n, out.pairs.size());
  std::partial_sort(out.pairs.begin(), out.pairs.begin() + static_cast<std::ptrdiff_t>(keep), out.pairs.end(), better);
  out.pairs.resize(keep);
  return out;
}

std::vector<ItemPair> training_window_pairs(const Dataset& data, std::size_t max_len) {
  std::vector<ItemPair> pairs;
  for (const auto& us : data.split.users) {
    for (std::size_t pos = 1; pos < us.train.size(); ++pos) {
      for (ItemId h : history_window(us.train, pos, max_len)) pairs.emplace_back(h, us.train[pos]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::vector<ItemPair> all_item_pairs(ItemId num_items, ItemId max_items) {
  if (num_items > max_items) {
    throw Error(ErrorKind::Validation, "full pair scoring refused for " + std::to_string(num_items) +
                                           " items (limit " + std::to_string(max_items) + ")");
  }
  std::vector<ItemPair> pairs;
  pairs.reserve(static_cast<std::size_t>(num_items) * static_cast<std::size_t>(std::max(num_items - 1, 0)));
  for (ItemId a = 0; a < num_items; ++a) {
    for (ItemId b = 0; b < num_items; ++b) {
      if (a != b) pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

CaseTrace case_trace(UserId user, std::span<const ItemId> history, ItemId target, const ParamStore& params,
                     AggMode mode, std::span<const ItemId> negatives) {
  if (history.empty()) throw Error(ErrorKind::Validation, "case_trace: user has no history");
  CaseTrace out;
  out.user = user;
  out.target = target;
  const Eigen::Index nr = params.relation.rows();
  for (ItemId h : history) {
    HistoryRelation row;
    row.item = h;
    row.scores.resize(nr);
    for (Eigen::Index r = 0; r < nr; ++r) {
      row.scores[r] = distmult(row_span(params.item, h), row_span(params.relation, r), row_span(params.item, target));
    }
    Eigen::Index best = 0;
    row.scores.maxCoeff(&best);
    row.argmax = static_cast<RelationId>(best);
    out.history.push_back(std::move(row));
  }
  if (!negatives.empty()) {
    out.target_rank = rank_target(user, history, target, negatives, params, mode, negatives.size()).rank;
  }
  return out;
}

std::vector<RelationId> posterior_argmax(std::span<const ItemPair> pairs, const EmbeddingTable* text,
                                         const ParamStore& params, bool from_ids) {
  std::vector<RelationId> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const std::vector<ItemId> items{a, b};
    const Matrix e = posterior_inputs(items, text, params, from_ids);
    const auto q = relation_posterior(row_span(e, 0), row_span(e, 1), params);
    Eigen::Index best = 0;
    q.probs.maxCoeff(&best);
    out.push_back(static_cast<RelationId>(best));
  }
  return out;
}

Real cluster_purity(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || predicted.empty()) {
    throw Error(ErrorKind::Validation, "cluster_purity: label lists must be non-empty and of equal length");
  }
  std::map<int, std::map<int, std::size_t>> counts;
  for (std::size_t i = 0; i < predicted.size(); ++i) ++counts[predicted[i]][truth[i]];
  std::size_t majority = 0;
  for (const auto& [_, labels] : counts) {
    std::size_t best = 0;
    for (const auto& [__, c] : labels) best = std::max(best, c);
    majority += best;
  }
  return static_cast<Real>(majority) / static_cast<Real>(predicted.size());
}

SweepGrid default_sweep_grid() { return {{5, 6, 7, 8, 9, 10}, {0.1, 1, 5, 10}}; }

void compute_marginals(SweepResult& result) {
  std::map<int, std::pair<Real, int>> latent;
  std::map<Real, std::pair<Real, int>> lambda;
  for (const auto& c : result.cells) {
    if (c.error) continue;
    latent[c.num_latent].first += c.mean_ndcg5;
    ++latent[c.num_latent].second;
    lambda[c.lambda].first += c.mean_ndcg5;
    ++lambda[c.lambda].second;
  }
  result.by_num_latent.clear();
  result.by_lambda.clear();
  for (const auto& [k, v] : latent) result.by_num_latent[k] = v.first / v.second;
  for (const auto& [k, v] : lambda) result.by_lambda[k] = v.first / v.second;
}

SweepResult sweep(const SweepGrid& grid, const TrainConfig& base, std::span<const std::uint64_t> seeds,
                  const CellRunner& run) {
  if (grid.num_latent.empty() || grid.lambda.empty() || seeds.empty()) {
    throw Error(ErrorKind::Validation, "sweep: grid and seed list must be non-empty");
  }
  SweepResult result;
  for (int nl : grid.num_latent) {
    for (Real lam : grid.lambda) {
      SweepCell cell;
      cell.num_latent = nl;
      cell.lambda = lam;
      try {
        for (auto seed : seeds) {
          TrainConfig cfg = base;
          cfg.model.num_latent = nl;
          cfg.weights.lambda = lam;
          cfg.seed = seed;
          cell.runs.push_back({seed, run(cfg)});
        }
        for (const auto& r : cell.runs) cell.mean_ndcg5 += r.metrics.ndcg5;
        cell.mean_ndcg5 /= static_cast<Real>(cell.runs.size());
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      result.cells.push_back(std::move(cell));
    }
  }
  compute_marginals(result);
  return result;
}

CellRunner make_training_runner(const Dataset& data, const EmbeddingTable* text, EvalSplit split) {
  return [&data, text, split](const TrainConfig& cfg) {
    const auto trained = train(data, text, cfg);
    return evaluate(data, trained.best, cfg.model.agg, split, cfg.model.max_len);
  };
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "kind,num_latent,lambda,seeds,ndcg5_mean,error\n";
  for (const auto& c : result.cells) {
    out << "cell," << c.num_latent << ',' << c.lambda << ',' << c.runs.size() << ',' << c.mean_ndcg5 << ','
        << (c.error ? csv_quote(*c.error) : "") << '\n';
  }
  for (const auto& [nl, v] : result.by_num_latent) out << "by_num_latent," << nl << ",,," << v << ",\n";
  for (const auto& [lam, v] : result.by_lambda) out << "by_lambda,," << lam << ",," << v << ",\n";
  return out.str();
}

std::string similarity_csv(const Matrix& sim, const RelationVocab& vocab) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << "relation";
  for (Eigen::Index r = 0; r < sim.cols(); ++r) out << ',' << vocab.name(static_cast<RelationId>(r));
  out << '\n';
  for (Eigen::Index a = 0; a < sim.rows(); ++a) {
    out << vocab.name(static_cast<RelationId>(a));
    for (Eigen::Index b = 0; b < sim.cols(); ++b) out << ',' << sim(a, b);
    out << '\n';
  }
  return out.str();
}

}  // namespace lrd
