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

#include "../support/tiny_instance.hpp"

#include <gtest/gtest.h>

namespace lrd {
namespace {

using testing::check_gradients;
using testing::make_tiny_instance;

class GradientCheck : public ::testing::TestWithParam<std::tuple<AggMode, std::uint64_t>> {};

TEST_P(GradientCheck, JointLossMatchesCentralDifferences) {
  auto [agg, seed] = GetParam();
  auto inst = make_tiny_instance(seed, agg);
  const auto report = check_gradients(inst, LossWeights{1.0, 1.0, 0.1});
  EXPECT_GT(report.checked, 100u);
  EXPECT_LE(report.max_rel_error, 1e-4) << "worst partial: " << report.worst;
  EXPECT_LE(report.max_abs_error, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(AggModes, GradientCheck,
                         ::testing::Combine(::testing::Values(AggMode::Mean, AggMode::Attention),
                                            ::testing::Values(1u, 2u, 3u)));

TEST(GradientCheckTest, EachLossTermInIsolation) {
  for (const LossWeights w : {LossWeights{0, 0, 0.1}, LossWeights{1, 0, 0.1}, LossWeights{0, 1, 0},
                              LossWeights{0, 1, 1.0}}) {
    auto inst = make_tiny_instance(11, AggMode::Attention);
    const auto report = check_gradients(inst, w);
    EXPECT_LE(report.max_rel_error, 1e-4)
        << "gamma=" << w.gamma << " lambda=" << w.lambda << " alpha=" << w.alpha << " worst " << report.worst;
  }
}

TEST(GradientCheckTest, PosteriorFromIdsRoutesIntoItemEmbeddings) {
  auto inst = make_tiny_instance(5, AggMode::Mean);
  inst.config.posterior_from_ids = true;
  const auto report = check_gradients(inst, LossWeights{1, 1, 0.1});
  EXPECT_LE(report.max_rel_error, 1e-4) << report.worst;
  const auto g = compute_gradients(inst.batch, inst.params, &inst.text, inst.config, {1, 1, 0.1});
  EXPECT_EQ(g.grads.projection.weight.norm(), 0.0);
}

TEST(GradientCheckTest, ReportedLossEqualsForwardLoss) {
  auto inst = make_tiny_instance(9, AggMode::Attention);
  const LossWeights w{0.7, 2.0, 0.3};
  const auto g = compute_gradients(inst.batch, inst.params, &inst.text, inst.config, w);
  const auto f = joint_loss(inst.batch, inst.params, &inst.text, inst.config, w);
  EXPECT_NEAR(g.loss.total, f.total, 1e-12);
  EXPECT_NEAR(g.loss.l_rec, f.l_rec, 1e-12);
  EXPECT_NEAR(g.loss.l_kge, f.l_kge, 1e-12);
  EXPECT_NEAR(g.loss.l_lrd, f.l_lrd, 1e-12);
}

TEST(GradientCheckTest, NonFiniteLossIsReportedAsNumericError) {
  auto inst = make_tiny_instance(4, AggMode::Mean);
  inst.params.user(0, 0) = std::numeric_limits<Real>::quiet_NaN();
  try {
    compute_gradients(inst.batch, inst.params, &inst.text, inst.config, {1, 1, 0.1});
    FAIL() << "expected a numeric error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Numeric);
  }
}

}  // namespace
}  // namespace lrd
