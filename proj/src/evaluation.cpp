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

#include "lrd/evaluation.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace lrd {

int rank_from_scores(Real target_score, std::span<const Real> negative_scores) {
  int rank = 1;
  for (Real s : negative_scores) rank += (s >= target_score);
  return rank;
}

RankResult rank_target(UserId user, std::span<const ItemId> history, ItemId target,
                       std::span<const ItemId> negatives, const ParamStore& params, AggMode mode,
                       std::size_t expected_negatives) {
  if (negatives.size() != expected_negatives) {
    throw Error(ErrorKind::Data, "user " + std::to_string(user) + ": expected " +
                                     std::to_string(expected_negatives) + " negatives, got " +
                                     std::to_string(negatives.size()));
  }
  RankResult out;
  out.user = user;
  out.scores.reserve(negatives.size() + 1);
  out.scores.push_back(preference_score(user, history, target, params, mode));
  for (ItemId c : negatives) out.scores.push_back(preference_score(user, history, c, params, mode));
  out.rank = rank_from_scores(out.scores[0], std::span<const Real>(out.scores).subspan(1));
  return out;
}

Real hr_at_k(int rank, int k) {
  if (k < 1) throw Error(ErrorKind::Validation, "k must be >= 1");
  if (rank < 1) throw Error(ErrorKind::Validation, "rank must be >= 1");
  return rank <= k ? 1.0 : 0.0;
}

Real ndcg_at_k(int rank, int k) {
  if (k < 1) throw Error(ErrorKind::Validation, "k must be >= 1");
  if (rank < 1) throw Error(ErrorKind::Validation, "rank must be >= 1");
  return rank <= k ? 1.0 / std::log2(static_cast<Real>(rank) + 1.0) : 0.0;
}

EvalSplit parse_split(std::string_view s) {
  if (s == "valid") return EvalSplit::Valid;
  if (s == "test") return EvalSplit::Test;
  throw Error(ErrorKind::Validation, "split must be 'valid' or 'test', got '" + std::string(s) + "'");
}

std::string_view to_string(EvalSplit s) { return s == EvalSplit::Valid ? "valid" : "test"; }

MetricsReport evaluate(const Dataset& data, const ParamStore& params, AggMode mode, EvalSplit split,
                       std::size_t max_len, std::vector<RankResult>* ranks) {
  MetricsReport report;
  std::vector<ItemId> prefix;
  for (std::size_t k = 0; k < data.split.users.size(); ++k) {
    const auto& us = data.split.users[k];
    prefix = us.train;
    ItemId target = us.valid_target;
    const auto& negatives = split == EvalSplit::Valid ? data.valid_negatives[k] : data.test_negatives[k];
    if (split == EvalSplit::Test) {
      prefix.push_back(us.valid_target);
      target = us.test_target;
    }
    if (prefix.empty()) {
      ++report.skipped;
      continue;
    }
    const auto history = history_window(prefix, prefix.size(), max_len);
    auto rr = rank_target(us.user, history, target, negatives, params, mode, negatives.size());
    report.hr5 += hr_at_k(rr.rank, 5);
    report.hr10 += hr_at_k(rr.rank, 10);
    report.ndcg5 += ndcg_at_k(rr.rank, 5);
    report.ndcg10 += ndcg_at_k(rr.rank, 10);
    ++report.users;
    if (ranks) ranks->push_back(std::move(rr));
  }
  if (report.users > 0) {
    const Real n = static_cast<Real>(report.users);
    report.hr5 /= n;
    report.hr10 /= n;
    report.ndcg5 /= n;
    report.ndcg10 /= n;
  }
  return report;
}

namespace {

template <typename Get>
MetricSummary summarize(std::span<const SeedRun> runs, Get get) {
  MetricSummary s;
  if (runs.empty()) return s;
  for (const auto& r : runs) s.mean += get(r.metrics);
  s.mean /= static_cast<Real>(runs.size());
  if (runs.size() > 1) {
    Real ss = 0;
    for (const auto& r : runs) ss += (get(r.metrics) - s.mean) * (get(r.metrics) - s.mean);
    s.std = std::sqrt(ss / static_cast<Real>(runs.size() - 1));
  }
  return s;
}

nlohmann::ordered_json to_json(const MetricsReport& m) {
  return {{"hr@5", m.hr5}, {"hr@10", m.hr10}, {"ndcg@5", m.ndcg5}, {"ndcg@10", m.ndcg10}, {"users", m.users}};
}

}  // namespace

SeedAggregate aggregate_seeds(std::span<const SeedRun> runs) {
  return {summarize(runs, [](const MetricsReport& m) { return m.hr5; }),
          summarize(runs, [](const MetricsReport& m) { return m.hr10; }),
          summarize(runs, [](const MetricsReport& m) { return m.ndcg5; }),
          summarize(runs, [](const MetricsReport& m) { return m.ndcg10; })};
}

std::string metrics_json(const std::string& dataset, const std::string& variant, EvalSplit split,
                         std::span<const SeedRun> runs) {
  nlohmann::ordered_json j;
  j["dataset"] = dataset;
  j["variant"] = variant;
  j["split"] = std::string(to_string(split));
  auto seeds = nlohmann::ordered_json::array();
  auto per_seed = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    seeds.push_back(r.seed);
    auto entry = to_json(r.metrics);
    entry["seed"] = r.seed;
    per_seed.push_back(entry);
  }
  j["seeds"] = std::move(seeds);
  j["per_seed"] = std::move(per_seed);
  const auto agg = aggregate_seeds(runs);
  j["mean"] = {{"hr@5", agg.hr5.mean}, {"hr@10", agg.hr10.mean}, {"ndcg@5", agg.ndcg5.mean}, {"ndcg@10", agg.ndcg10.mean}};
  j["std"] = {{"hr@5", agg.hr5.std}, {"hr@10", agg.hr10.std}, {"ndcg@5", agg.ndcg5.std}, {"ndcg@10", agg.ndcg10.std}};
  return j.dump(2) + "\n";
}

std::string metrics_csv_header() {
  return "dataset,variant,seeds,hr5_mean,hr5_std,hr10_mean,hr10_std,ndcg5_mean,ndcg5_std,ndcg10_mean,ndcg10_std";
}

std::string metrics_csv_row(const std::string& dataset, const std::string& variant, std::span<const SeedRun> runs) {
  const auto agg = aggregate_seeds(runs);
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << dataset << ',' << variant << ',' << runs.size();
  for (const auto* s : {&agg.hr5, &agg.hr10, &agg.ndcg5, &agg.ndcg10}) out << ',' << s->mean << ',' << s->std;
  return out.str();
}

}  // namespace lrd
