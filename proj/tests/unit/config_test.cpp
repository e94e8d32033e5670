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

#include "lrd/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace lrd {
namespace {

std::string validation_message(const ConfigValues& file, const ConfigValues& overrides = {}) {
  try {
    build_config(file, overrides);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    return e.what();
  }
  ADD_FAILURE() << "no validation error";
  return {};
}

TEST(ConfigTest, EmptyFileGivesDefaults) {
  const auto c = build_config(parse_config_text(""));
  EXPECT_EQ(c.model.dim, 64);
  EXPECT_EQ(c.batch_size, 256u);
  EXPECT_EQ(c.model.max_len, 20u);
  EXPECT_EQ(c.weights.alpha, 0.1);
  EXPECT_EQ(c.patience, 10u);
  EXPECT_EQ(c.variant, Variant::Full);
}

TEST(ConfigTest, ParsesCommentsQuotesAndTypes) {
  const auto values = parse_config_text(
      "# experiment\n"
      "d = 32   # trailing comment\n"
      "\n"
      "agg = \"attention\"\n"
      "lambda=5\n"
      "corrupt_both = true\n"
      "variant = no_kge\n");
  EXPECT_EQ(values.at("d"), "32");
  EXPECT_EQ(values.at("agg"), "attention");
  const auto c = build_config(values);
  EXPECT_EQ(c.model.dim, 32);
  EXPECT_EQ(c.model.agg, AggMode::Attention);
  EXPECT_EQ(c.weights.lambda, 5);
  EXPECT_TRUE(c.corrupt_both);
  EXPECT_EQ(c.variant, Variant::NoKge);
}

TEST(ConfigTest, NegativeDimensionNamesTheKey) {
  const auto msg = validation_message(parse_config_text("d = -1"));
  EXPECT_NE(msg.find("'d'"), std::string::npos) << msg;
}

TEST(ConfigTest, BadValuesAreRejected) {
  EXPECT_NE(validation_message({{"lr", "0"}}).find("'lr'"), std::string::npos);
  EXPECT_NE(validation_message({{"batch", "ten"}}).find("'batch'"), std::string::npos);
  EXPECT_NE(validation_message({{"agg", "max"}}).find("'agg'"), std::string::npos);
  EXPECT_NE(validation_message({{"alpha", "-0.5"}}).find("'alpha'"), std::string::npos);
  EXPECT_NE(validation_message({{"corrupt_both", "maybe"}}).find("'corrupt_both'"), std::string::npos);
  EXPECT_NE(validation_message({{"lr", "1e-3x"}}).find("'lr'"), std::string::npos);
  EXPECT_NE(validation_message({{"variant", "none"}}).find("'variant'"), std::string::npos);
}

TEST(ConfigTest, UnknownKeysAreRejected) {
  const auto msg = validation_message({{"learning_rate", "0.1"}});
  EXPECT_NE(msg.find("unknown config key 'learning_rate'"), std::string::npos) << msg;
}

TEST(ConfigTest, MalformedAndDuplicateLinesCiteTheLine) {
  for (const char* text : {"d = 4\njust words\n", "d = 4\nd = 8\n", "= 3\n"}) {
    try {
      parse_config_text(text, "exp.cfg");
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Parse);
      EXPECT_NE(std::string(e.what()).find("exp.cfg:"), std::string::npos) << e.what();
    }
  }
}

TEST(ConfigTest, FlagOverridesFile) {
  const auto c = build_config(parse_config_text("lr=1e-3\nseed = 4"), {{"lr", "1e-2"}});
  EXPECT_EQ(c.lr, 1e-2);
  EXPECT_EQ(c.seed, 4u);
}

TEST(ConfigTest, CanonicalTextRoundTrips) {
  auto c = build_config({{"d", "16"}, {"lr", "0.0001"}, {"l2", "1e-6"}, {"agg", "attention"}, {"variant", "no_llm"},
                         {"lambda", "0.1"}, {"freeze_projection", "true"}});
  const auto text = config_to_text(c);
  EXPECT_NE(text.find("l2 = 1e-06"), std::string::npos) << text;
  const auto back = build_config(parse_config_text(text));
  EXPECT_EQ(config_to_text(back), text);
  EXPECT_EQ(back.lr, c.lr);
  EXPECT_EQ(back.model.agg, AggMode::Attention);
  EXPECT_TRUE(back.freeze_projection);
  // Every documented key appears exactly once.
  for (const auto& [key, _] : config_keys()) {
    EXPECT_NE(("\n" + text).find("\n" + std::string(key) + " = "), std::string::npos) << key;
  }
}

TEST(ConfigTest, LoadsFromDisk) {
  const auto path = (std::filesystem::temp_directory_path() / "lrd_config_test.cfg").string();
  { std::ofstream(path) << "d = 8\nnum_latent = 5\n"; }
  const auto c = load_config(path, {{"num_latent", "9"}});
  std::filesystem::remove(path);
  EXPECT_EQ(c.model.dim, 8);
  EXPECT_EQ(c.model.num_latent, 9);
  EXPECT_THROW(load_config(path), Error);
}

}  // namespace
}  // namespace lrd
