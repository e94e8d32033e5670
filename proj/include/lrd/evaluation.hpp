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
#include <string>
#include <vector>

namespace lrd {

struct RankResult {
  UserId user = 0;
  int rank = 1;               // 1 = best
  std::vector<Real> scores;   // target first, then negatives in input order
};

// 1 + #{negatives scoring >= target}: ties count against the target.
int rank_from_scores(Real target_score, std::span<const Real> negative_scores);

RankResult rank_target(UserId user, std::span<const ItemId> history, ItemId target,
                       std::span<const ItemId> negatives, const ParamStore& params, AggMode mode,
                       std::size_t expected_negatives = 99);

Real hr_at_k(int rank, int k);
Real ndcg_at_k(int rank, int k);

enum class EvalSplit { Valid, Test };

EvalSplit parse_split(std::string_view s);
std::string_view to_string(EvalSplit s);

struct MetricsReport {
  Real hr5 = 0, hr10 = 0, ndcg5 = 0, ndcg10 = 0;
  std::size_t users = 0;
  std::size_t skipped = 0;
};

// History: the train prefix (plus the validation item for Test), truncated
// to the last `max_len` items. Users are weighted uniformly.
MetricsReport evaluate(const Dataset& data, const ParamStore& params, AggMode mode, EvalSplit split,
                       std::size_t max_len = 20, std::vector<RankResult>* ranks = nullptr);

struct SeedRun {
  std::uint64_t seed = 0;
  MetricsReport metrics;
};

struct MetricSummary {
  Real mean = 0;
  Real std = 0;  // sample standard deviation; 0 for a single seed
};

struct SeedAggregate {
  MetricSummary hr5, hr10, ndcg5, ndcg10;
};

SeedAggregate aggregate_seeds(std::span<const SeedRun> runs);

// metrics.json body: dataset, variant, split, seeds, per-seed metrics, mean, std.
std::string metrics_json(const std::string& dataset, const std::string& variant, EvalSplit split,
                         std::span<const SeedRun> runs);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& dataset, const std::string& variant, std::span<const SeedRun> runs);

}  // namespace lrd
