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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace lrd {
namespace {

ParamStore random_params(int d, int nr, int items, std::uint64_t seed, Real scale = 0.8, int text_dim = 5) {
  ModelConfig c;
  c.dim = d;
  c.text_dim = text_dim;
  c.num_predefined = 0;
  c.num_latent = nr;
  Rng rng(seed);
  ParamStore p = ParamStore::init(c, 3, items, rng);
  std::uniform_real_distribution<Real> u(-scale, scale);
  for (auto& t : p.views()) {
    for (auto& x : t.values()) x = u(rng);
  }
  return p;
}

// Independent reference implementations.
Real ref_sigmoid(Real x) { return 1.0 / (1.0 + std::exp(-x)); }
Real ref_phi(const ParamStore& p, ItemId a, int r, ItemId b) {
  Real s = 0;
  for (int k = 0; k < p.dim(); ++k) s += p.item(a, k) * p.relation(r, k) * p.item(b, k);
  return s;
}
std::vector<Real> ref_softmax(std::vector<Real> x) {
  const Real mx = *std::max_element(x.begin(), x.end());
  Real sum = 0;
  for (auto& v : x) sum += (v = std::exp(v - mx));
  for (auto& v : x) v /= sum;
  return x;
}

RelationPosterior posterior_of(std::vector<Real> probs) {
  RelationPosterior q;
  q.probs = Eigen::Map<Vector>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  q.log_probs = q.probs.array().log();
  q.logits = q.log_probs;
  return q;
}

TEST(BprLossTest, Examples) {
  EXPECT_NEAR(bpr_loss(1.25, 1.25), std::log(2.0), 1e-15);
  EXPECT_LT(bpr_loss(40, 0), 1e-15);
  EXPECT_GT(bpr_loss(40, 0), 0.0);
  EXPECT_NEAR(bpr_loss(0, 3), 3.0485873515737420, 1e-14);
  EXPECT_NEAR(bpr_loss(0, 3), -std::log(ref_sigmoid(-3)), 1e-14);
  EXPECT_TRUE(std::isfinite(bpr_loss(-800, 800)));
  EXPECT_NEAR(bpr_loss(-800, 800), 1600, 1e-9);
}

TEST(BprLossTest, PositiveAndStrictlyDecreasing) {
  Real prev = bpr_loss(-30, 0);
  for (Real x = -29.5; x <= 30; x += 0.5) {
    const Real cur = bpr_loss(x, 0);
    EXPECT_GT(cur, 0.0);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(EntropyTest, Examples) {
  const std::vector<Real> uniform(6, 1.0 / 6), one_hot{0, 1, 0}, mixed{0.5, 0.25, 0.25};
  EXPECT_NEAR(entropy(uniform), std::log(6.0), 1e-15);
  EXPECT_EQ(entropy(one_hot), 0.0);
  EXPECT_NEAR(entropy(mixed), 1.5 * std::log(2.0), 1e-15);
}

TEST(EntropyTest, BoundedByLogR) {
  Rng rng(1);
  std::exponential_distribution<Real> e(1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Real> q(1 + trial % 9);
    for (auto& v : q) v = e(rng);
    const Real s = std::accumulate(q.begin(), q.end(), 0.0);
    for (auto& v : q) v /= s;
    const Real h = entropy(q);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log(static_cast<Real>(q.size())) + 1e-12);
  }
}

TEST(ReconstructionTermTest, Examples) {
  auto p = random_params(3, 2, 5, 2);
  p.relation.row(1).setZero();
  EXPECT_NEAR(reconstruction_term(0, 1, 2, 1, p), 2 * std::log(0.5), 1e-15);

  p.relation.row(0) << 1, 0, 0;
  p.item.row(0) << 40, 0, 0;
  p.item.row(1) << 1, 0, 0;
  p.item.row(2) << -40, 0, 0;
  const Real limit = reconstruction_term(0, 1, 2, 0, p);
  EXPECT_LE(limit, 0.0);
  EXPECT_GT(limit, -1e-15);
}

TEST(ReconstructionTermTest, MatchesIndependentSigmoid) {
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_params(4, 3, 6, 100 + trial, 1.5);
    const ItemId i = trial % 6, j = (trial + 1) % 6, n = (trial + 3) % 6;
    const int r = trial % 3;
    const Real expected = std::log(ref_sigmoid(ref_phi(p, i, r, j))) + std::log(ref_sigmoid(-ref_phi(p, n, r, j)));
    EXPECT_NEAR(reconstruction_term(i, j, n, r, p), expected, 1e-12);
  }
}

TEST(LrdPairLossTest, SingleRelationIsMinusReconstruction) {
  const auto p = random_params(4, 1, 6, 3);
  const auto q = posterior_of({1.0});
  EXPECT_NEAR(lrd_pair_loss(1, 2, 3, q, p, 0.1), -reconstruction_term(1, 2, 3, 0, p), 1e-15);
}

TEST(LrdPairLossTest, UniformPosteriorZeroScores) {
  auto p = random_params(4, 5, 6, 4);
  p.relation.setZero();
  const auto q = posterior_of(std::vector<Real>(5, 0.2));
  EXPECT_NEAR(lrd_pair_loss(1, 2, 3, q, p, 0.0), 2 * std::log(2.0), 1e-12);
  EXPECT_NEAR(lrd_pair_loss(1, 2, 3, q, p, 0.1), 2 * std::log(2.0) - 0.1 * std::log(5.0), 1e-12);
}

TEST(LrdPairLossTest, ConvexCombinationOfRelationLosses) {
  Rng rng(5);
  std::exponential_distribution<Real> e(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_params(4, 6, 8, 200 + trial, 1.5);
    std::vector<Real> probs(6);
    for (auto& v : probs) v = e(rng);
    const Real s = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (auto& v : probs) v /= s;
    Real lo = 1e300, hi = -1e300;
    for (int r = 0; r < 6; ++r) {
      const Real l = -reconstruction_term(0, 5, 7, r, p);
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
    const Real loss = lrd_pair_loss(0, 5, 7, posterior_of(probs), p, 0.0);
    EXPECT_GE(loss, lo - 1e-12);
    EXPECT_LE(loss, hi + 1e-12);
  }
}

TEST(LrdLossTest, MatchesBruteForceOverPairsAndRelations) {
  const auto p = random_params(4, 3, 10, 6, 0.9, 6);
  EmbeddingTable text{Matrix::Random(10, 6)};
  ModelConfig config;
  config.dim = 4;
  Batch batch;
  batch.rec.push_back({0, {1, 2, 3}, 4, 7, {5, 6, 8}});
  batch.rec.push_back({1, {2, 9}, 0, 3, {4, 1}});
  const Real alpha = 0.3;

  Real total = 0, total_h = 0;
  int pairs = 0;
  for (const auto& ex : batch.rec) {
    for (std::size_t k = 0; k < ex.history.size(); ++k) {
      // e = raw W1 + b1, logits = W2ᵀ [e_i; e_j] + b2, written out element by element.
      std::vector<Real> ei(4), ej(4);
      for (int c = 0; c < 4; ++c) {
        ei[c] = p.projection.bias[c];
        ej[c] = p.projection.bias[c];
        for (int a = 0; a < 6; ++a) {
          ei[c] += text.vectors(ex.history[k], a) * p.projection.weight(a, c);
          ej[c] += text.vectors(ex.target, a) * p.projection.weight(a, c);
        }
      }
      std::vector<Real> logits(3);
      for (int r = 0; r < 3; ++r) {
        logits[r] = p.cls_bias[r];
        for (int c = 0; c < 4; ++c) logits[r] += p.cls_weight(c, r) * ei[c] + p.cls_weight(4 + c, r) * ej[c];
      }
      const auto q = ref_softmax(logits);
      Real h = 0, expected = 0;
      for (int r = 0; r < 3; ++r) {
        h -= q[r] * std::log(q[r]);
        expected += q[r] * (std::log(ref_sigmoid(ref_phi(p, ex.history[k], r, ex.target))) +
                            std::log(ref_sigmoid(-ref_phi(p, ex.lrd_negatives[k], r, ex.target))));
      }
      total += -expected - alpha * h;
      total_h += h;
      ++pairs;
    }
  }
  const auto got = lrd_loss(batch, p, &text, config, alpha);
  EXPECT_EQ(got.pairs, 5u);
  EXPECT_NEAR(got.loss, total / pairs, 1e-12);
  EXPECT_NEAR(got.mean_entropy, total_h / pairs, 1e-12);
}

TEST(LrdLossTest, MismatchedNegativesThrow) {
  const auto p = random_params(4, 3, 10, 7);
  ModelConfig config;
  config.posterior_from_ids = true;
  Batch batch;
  batch.rec.push_back({0, {1, 2}, 4, 7, {5}});
  EXPECT_THROW(lrd_loss(batch, p, nullptr, config, 0.1), Error);
}

TEST(KgeLossTest, Examples) {
  auto p = random_params(3, 2, 6, 8);
  const Triplet t{0, 1, 0}, c{2, 1, 0};
  p.item.row(2) = p.item.row(0);
  EXPECT_NEAR(kge_loss(t, c, p), std::log(2.0), 1e-15);
  p.relation.row(0) << 1, 0, 0;
  p.item.row(0) << 40, 0, 0;
  p.item.row(1) << 1, 0, 0;
  p.item.row(2) << 0, 0, 0;
  EXPECT_LT(kge_loss(t, c, p), 1e-15);
}

TEST(KgeLossTest, IsBprOfTheTwoScores) {
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_params(4, 3, 7, 300 + trial, 1.5);
    const Triplet t{trial % 7, (trial + 2) % 7, trial % 3};
    Triplet c = t;
    c.tail = (trial + 5) % 7;
    EXPECT_NEAR(kge_loss(t, c, p), bpr_loss(ref_phi(p, t.head, t.relation, t.tail), ref_phi(p, c.head, c.relation, c.tail)),
                1e-14);
  }
}

Batch small_batch() {
  Batch b;
  b.rec.push_back({0, {1, 2, 3}, 4, 7, {5, 6, 8}});
  b.rec.push_back({1, {2, 9}, 0, 3, {4, 1}});
  b.kge.push_back({{1, 2, 0}, {1, 5, 0}});
  b.kge.push_back({{3, 4, 1}, {7, 4, 1}});
  return b;
}

TEST(JointLossTest, ZeroWeightsReduceToBpr) {
  const auto p = random_params(4, 3, 10, 9);
  ModelConfig config;
  config.posterior_from_ids = true;
  const auto batch = small_batch();
  const auto out = joint_loss(batch, p, nullptr, config, {0.0, 0.0, 0.1});
  Real bpr = 0;
  for (const auto& ex : batch.rec) {
    bpr += bpr_loss(preference_score(ex.user, ex.history, ex.target, p, AggMode::Mean),
                    preference_score(ex.user, ex.history, ex.negative, p, AggMode::Mean));
  }
  EXPECT_NEAR(out.total, bpr / 2, 1e-15);
  EXPECT_EQ(out.total, out.l_rec);
}

TEST(JointLossTest, BreakdownInvariant) {
  Rng rng(10);
  std::uniform_real_distribution<Real> w(0, 10);
  const auto batch = small_batch();
  ModelConfig config;
  config.posterior_from_ids = true;
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_params(4, 3, 10, 400 + trial);
    const LossWeights weights{w(rng), w(rng), 0.1};
    const auto out = joint_loss(batch, p, nullptr, config, weights);
    EXPECT_NEAR(out.total, out.l_rec + weights.gamma * out.l_kge + weights.lambda * out.l_lrd, 1e-9);
    EXPECT_GT(out.l_kge, 0.0);
    EXPECT_GT(out.l_lrd, 0.0);
  }
  const auto p = random_params(4, 3, 10, 11);
  EXPECT_THROW(joint_loss(batch, p, nullptr, config, {-1.0, 1.0, 0.1}), Error);
}

// Exact posterior of direction i under the uniform prior: q_r ∝ p(v_i | v_-i, r).
std::vector<Real> exact_posterior(ItemId self, ItemId other, const ParamStore& p) {
  std::vector<Real> lp;
  for (int r = 0; r < p.num_relations(); ++r) lp.push_back(item_log_likelihood(self, other, r, p));
  return ref_softmax(lp);
}

TEST(ElboTest, TightAtTheExactPosterior) {
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_params(4, 5, 12, 500 + trial, 1.5);
    const ItemId a = trial % 12, b = (trial + 5) % 12;
    const auto qf = exact_posterior(a, b, p), qb = exact_posterior(b, a, p);
    const auto res = elbo_exact(a, b, p, qf, qb, 1.0);
    EXPECT_NEAR(res.bound, res.pseudo_ll, 1e-9);
    EXPECT_NEAR(res.objective - 2 * std::log(5.0), res.pseudo_ll, 1e-9);
  }
}

TEST(ElboTest, JensenBoundOverRandomDraws) {
  Rng rng(12);
  std::exponential_distribution<Real> e(1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(3, 4, 8, 1000 + trial, 1.5);
    std::vector<Real> qf(4), qb(4);
    for (auto* q : {&qf, &qb}) {
      for (auto& v : *q) v = e(rng);
      const Real s = std::accumulate(q->begin(), q->end(), 0.0);
      for (auto& v : *q) v /= s;
    }
    const auto res = elbo_exact(trial % 8, (trial + 3) % 8, p, qf, qb, 1.0);
    EXPECT_LE(res.bound, res.pseudo_ll + 1e-9);
  }
}

TEST(ElboTest, SingleRelationHasNoGap) {
  const auto p = random_params(4, 1, 9, 13, 1.5);
  const std::vector<Real> one{1.0};
  const auto res = elbo_exact(2, 7, p, one, one, 1.0);
  EXPECT_EQ(res.bound, res.pseudo_ll);
  EXPECT_EQ(res.objective, res.pseudo_ll);
}

TEST(ElboTest, ClassifierOverloadUsesPosteriorFromInputs) {
  const auto p = random_params(4, 3, 9, 14);
  ModelConfig config;
  config.posterior_from_ids = true;
  const auto res = elbo_exact(1, 4, p, nullptr, config, 1.0);
  EXPECT_LE(res.bound, res.pseudo_ll + 1e-9);
  const std::vector<ItemId> items{1, 4};
  const Matrix e = posterior_inputs(items, nullptr, p, true);
  const auto qf = relation_posterior(row_span(e, 0), row_span(e, 1), p);
  const auto qb = relation_posterior(row_span(e, 1), row_span(e, 0), p);
  EXPECT_EQ(res.bound, elbo_exact(1, 4, p, as_span(qf.probs), as_span(qb.probs), 1.0).bound);
}

TEST(ElboTest, RejectsLargeCatalogsAndBadPosteriors) {
  const auto big = random_params(2, 2, kElboMaxItems + 1, 15);
  EXPECT_THROW(item_log_likelihood(0, 1, 0, big), Error);
  const auto p = random_params(2, 2, 5, 16);
  const std::vector<Real> wrong{1.0};
  EXPECT_THROW(elbo_exact(0, 1, p, wrong, wrong, 1.0), Error);
}

}  // namespace
}  // namespace lrd
