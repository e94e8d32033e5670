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
#include "lrd/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace lrd {
namespace {

ParamStore random_params(int d, int nr, int items, std::uint64_t seed, Real scale = 1.0) {
  ModelConfig c;
  c.dim = d;
  c.text_dim = 4;
  c.num_latent = nr;
  Rng rng(seed);
  ParamStore p = ParamStore::init(c, 3, items, rng);
  std::uniform_real_distribution<Real> u(-scale, scale);
  for (auto& t : p.views()) {
    for (auto& x : t.values()) x = u(rng);
  }
  return p;
}

TEST(RelationSimilarityTest, HandExamples) {
  auto p = random_params(3, 3, 4, 1);
  p.relation.row(0) << 1, 2, 3;
  p.relation.row(1) << 2, 4, 6;
  p.relation.row(2) << 3, 0, -1;  // orthogonal to row 0
  const Matrix s = relation_similarity(p);
  EXPECT_NEAR(s(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(s(0, 2), 0.0, 1e-15);
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(s(r, r), 1.0, 1e-6);
}

TEST(RelationSimilarityTest, MatchesNormalisedGram) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_params(6, 7, 4, 10 + trial);
    const Matrix s = relation_similarity(p);
    const Matrix g = p.relation * p.relation.transpose();
    for (int a = 0; a < 7; ++a) {
      for (int b = 0; b < 7; ++b) {
        EXPECT_NEAR(s(a, b), g(a, b) / std::sqrt(g(a, a) * g(b, b)), 1e-12);
        EXPECT_EQ(s(a, b), s(b, a));
        EXPECT_LE(std::abs(s(a, b)), 1.0);
      }
    }
  }
}

TEST(RelationSimilarityTest, ZeroNormRelationIsNamed) {
  auto p = random_params(3, 4, 4, 2);
  p.relation.row(2).setZero();
  try {
    relation_similarity(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("relation 2"), std::string::npos) << e.what();
  }
}

Real phi(const ParamStore& p, ItemId a, RelationId r, ItemId b) {
  return (p.item.row(a).array() * p.relation.row(r).array() * p.item.row(b).array()).sum();
}

TEST(TopPairsTest, WholePoolSortedWhenNIsLarge) {
  const auto p = random_params(4, 3, 8, 3);
  const auto pool = all_item_pairs(8);
  EXPECT_EQ(pool.size(), 56u);
  const auto ex = top_pairs(1, pool, 1000, p);
  ASSERT_EQ(ex.pairs.size(), pool.size());
  for (std::size_t i = 1; i < ex.pairs.size(); ++i) EXPECT_GE(ex.pairs[i - 1].score, ex.pairs[i].score);
  for (const auto& sp : ex.pairs) EXPECT_NEAR(sp.score, phi(p, sp.head, 1, sp.tail), 1e-12);
}

TEST(TopPairsTest, TopOneMatchesLinearScan) {
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_params(5, 4, 12, 100 + trial);
    const auto pool = all_item_pairs(12);
    const RelationId r = trial % 4;
    ItemPair best = pool.front();
    for (const auto& pr : pool) {
      if (phi(p, pr.first, r, pr.second) > phi(p, best.first, r, best.second)) best = pr;
    }
    const auto ex = top_pairs(r, pool, 1, p);
    ASSERT_EQ(ex.pairs.size(), 1u);
    // DistMult is symmetric, so the mirrored pair ties; the smaller head wins.
    const ItemPair want = std::min(best, ItemPair{best.second, best.first});
    EXPECT_EQ(ex.pairs[0].head, want.first);
    EXPECT_EQ(ex.pairs[0].tail, want.second);
  }
}

TEST(TopPairsTest, TiesFollowItemIdOrder) {
  auto p = random_params(3, 2, 6, 4);
  p.relation.row(0).setZero();  // every pair scores 0
  const std::vector<ItemPair> pool{{4, 1}, {0, 5}, {2, 3}, {0, 2}, {4, 0}};
  const auto ex = top_pairs(0, pool, 5, p);
  const std::vector<std::pair<ItemId, ItemId>> want{{0, 2}, {0, 5}, {2, 3}, {4, 0}, {4, 1}};
  ASSERT_EQ(ex.pairs.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(ex.pairs[i].head, want[i].first);
    EXPECT_EQ(ex.pairs[i].tail, want[i].second);
  }
  EXPECT_EQ(top_pairs(0, pool, 5, p).pairs.size(), 5u);  // deterministic re-run
}

TEST(TopPairsTest, Errors) {
  const auto p = random_params(3, 2, 6, 5);
  EXPECT_THROW(top_pairs(0, {}, 3, p), Error);
  const std::vector<ItemPair> pool{{0, 1}};
  EXPECT_THROW(top_pairs(5, pool, 1, p), Error);
  EXPECT_THROW(all_item_pairs(6000), Error);
}

TEST(TrainingWindowPairsTest, CoversEveryWindowPairOnce) {
  const auto planted = make_fixture_dataset(3);
  const auto pairs = training_window_pairs(planted.data, 2);
  std::set<ItemPair> expected;
  for (const auto& us : planted.data.split.users) {
    for (std::size_t pos = 1; pos < us.train.size(); ++pos) {
      for (std::size_t k = pos >= 2 ? pos - 2 : 0; k < pos; ++k) expected.insert({us.train[k], us.train[pos]});
    }
  }
  EXPECT_EQ(std::set<ItemPair>(pairs.begin(), pairs.end()), expected);
  EXPECT_EQ(pairs.size(), expected.size());
  EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end()));
}

TEST(CaseTraceTest, ScoresMatchDistmultAndRankMatchesEvaluation) {
  const auto p = random_params(4, 5, 20, 6);
  const std::vector<ItemId> history{3, 7, 11, 2};
  const std::vector<ItemId> negatives{0, 1, 4, 5, 6, 8};
  const auto trace = case_trace(1, history, 9, p, AggMode::Mean, negatives);
  ASSERT_EQ(trace.history.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& h = trace.history[k];
    EXPECT_EQ(h.item, history[k]);
    for (RelationId r = 0; r < 5; ++r) EXPECT_NEAR(h.scores[r], phi(p, history[k], r, 9), 1e-12);
    Eigen::Index am = 0;
    h.scores.maxCoeff(&am);
    EXPECT_EQ(h.argmax, am);
  }
  EXPECT_EQ(trace.target_rank, rank_target(1, history, 9, negatives, p, AggMode::Mean, negatives.size()).rank);
  EXPECT_EQ(case_trace(1, history, 9, p, AggMode::Mean).target_rank, 0);
}

TEST(CaseTraceTest, SingleRelationAndInvariances) {
  const auto single = random_params(4, 1, 10, 7);
  const std::vector<ItemId> history{1, 2, 3};
  for (const auto& h : case_trace(0, history, 5, single, AggMode::Mean).history) EXPECT_EQ(h.argmax, 0);

  auto p = random_params(4, 6, 10, 8);
  const auto base = case_trace(0, history, 5, p, AggMode::Mean);
  p.item_bias.array() += 4.2;
  const auto biased = case_trace(0, history, 5, p, AggMode::Mean);
  p.relation *= 3.5;
  const auto scaled = case_trace(0, history, 5, p, AggMode::Mean);
  for (std::size_t k = 0; k < history.size(); ++k) {
    EXPECT_EQ(base.history[k].argmax, biased.history[k].argmax);
    EXPECT_EQ(base.history[k].argmax, scaled.history[k].argmax);
  }
  EXPECT_THROW(case_trace(0, {}, 5, p, AggMode::Mean), Error);
}

TEST(ClusterPurityTest, Examples) {
  const std::vector<int> truth{0, 0, 1, 1, 2, 2};
  const std::vector<int> perfect{5, 5, 3, 3, 9, 9};
  EXPECT_EQ(cluster_purity(perfect, truth), 1.0);
  const std::vector<int> merged{0, 0, 0, 0, 0, 0};
  EXPECT_NEAR(cluster_purity(merged, truth), 2.0 / 6.0, 1e-15);
  const std::vector<int> mixed{0, 0, 0, 1, 1, 1};
  EXPECT_NEAR(cluster_purity(mixed, truth), 4.0 / 6.0, 1e-15);
  const std::vector<int> short_list{0};
  EXPECT_THROW(cluster_purity(short_list, truth), Error);
}

TEST(SweepTest, DefaultGridCoversTheTunedValues) {
  const auto g = default_sweep_grid();
  EXPECT_EQ(g.num_latent, (std::vector<int>{5, 6, 7, 8, 9, 10}));
  EXPECT_EQ(g.lambda, (std::vector<Real>{0.1, 1, 5, 10}));
}

TEST(SweepTest, MarginalsRecomputeFromCells) {
  const SweepGrid grid{{5, 6, 7}, {0.1, 1.0}};
  const std::vector<std::uint64_t> seeds{1, 2};
  std::vector<TrainConfig> seen;
  // Synthetic metric: nDCG@5 = num_latent / 100 + λ / 10 + seed / 1000.
  const CellRunner fake = [&](const TrainConfig& c) {
    seen.push_back(c);
    MetricsReport m;
    m.ndcg5 = c.model.num_latent / 100.0 + c.weights.lambda / 10.0 + static_cast<Real>(c.seed) / 1000.0;
    return m;
  };
  const auto res = sweep(grid, TrainConfig{}, seeds, fake);
  EXPECT_EQ(seen.size(), 12u);
  ASSERT_EQ(res.cells.size(), 6u);
  for (const auto& cell : res.cells) {
    EXPECT_FALSE(cell.error);
    EXPECT_NEAR(cell.mean_ndcg5, cell.num_latent / 100.0 + cell.lambda / 10.0 + 0.0015, 1e-15);
  }
  for (int nl : {5, 6, 7}) EXPECT_NEAR(res.by_num_latent.at(nl), nl / 100.0 + 0.055 + 0.0015, 1e-15);
  for (Real lam : {0.1, 1.0}) EXPECT_NEAR(res.by_lambda.at(lam), 0.06 + lam / 10.0 + 0.0015, 1e-15);
  const auto csv = sweep_csv(res);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 6 + 3 + 2);
}

TEST(SweepTest, FailingCellIsRecordedAndSweepContinues) {
  const SweepGrid grid{{5, 6}, {1.0}};
  const std::vector<std::uint64_t> seeds{1};
  const CellRunner flaky = [](const TrainConfig& c) {
    if (c.model.num_latent == 5) throw Error(ErrorKind::Numeric, "diverged \"badly\"");
    MetricsReport m;
    m.ndcg5 = 0.4;
    return m;
  };
  const auto res = sweep(grid, TrainConfig{}, seeds, flaky);
  ASSERT_EQ(res.cells.size(), 2u);
  EXPECT_TRUE(res.cells[0].error);
  EXPECT_FALSE(res.cells[1].error);
  EXPECT_EQ(res.by_num_latent.count(5), 0u);
  EXPECT_EQ(res.by_lambda.at(1.0), 0.4);
  EXPECT_NE(sweep_csv(res).find("\"diverged \"\"badly\"\"\""), std::string::npos);
  EXPECT_THROW(sweep(SweepGrid{}, TrainConfig{}, seeds, flaky), Error);
}

TEST(SweepTest, SingleCellRunsOneTraining) {
  const auto planted = make_fixture_dataset(3);
  const auto text = HashTextEncoder(8, 1).encode_all(planted.data.item_text);
  TrainConfig base;
  base.model.dim = 8;
  base.max_epochs = 2;
  const std::vector<std::uint64_t> seeds{1};
  const auto res = sweep({{2}, {1.0}}, base, seeds, make_training_runner(planted.data, &text));
  ASSERT_EQ(res.cells.size(), 1u);
  EXPECT_FALSE(res.cells[0].error);
  EXPECT_GT(res.cells[0].mean_ndcg5, 0.0);
  base.model.num_latent = 2;
  const auto direct = train(planted.data, &text, base);
  EXPECT_EQ(res.cells[0].mean_ndcg5, evaluate(planted.data, direct.best, AggMode::Mean, EvalSplit::Test).ndcg5);
}

TEST(SimilarityCsvTest, UsesRelationNames) {
  RelationVocab vocab;
  vocab.predefined = {"genre"};
  vocab.num_latent = 1;
  Matrix sim(2, 2);
  sim << 1, 0.5, 0.5, 1;
  const auto csv = similarity_csv(sim, vocab);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "relation,genre," + vocab.name(1));
}

}  // namespace
}  // namespace lrd
