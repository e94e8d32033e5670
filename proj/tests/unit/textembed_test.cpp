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

#include "lrd/textembed.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

namespace lrd {
namespace {

namespace fs = std::filesystem;

std::string temp_file(const std::string& name, const std::string& content = "") {
  const auto p = (fs::temp_directory_path() / ("lrd_textembed_" + name)).string();
  if (!content.empty()) std::ofstream(p) << content;
  return p;
}

Real cosine(const Vector& a, const Vector& b) { return a.dot(b) / (a.norm() * b.norm()); }

TEST(EmbeddingFileTest, TextHeaderAndRows) {
  const auto p = temp_file("ok.txt", "2 3\n0 0.5 1 2\n1 -1 0 3.25\n");
  const auto t = load_embedding_text(p);
  ASSERT_EQ(t.size(), 2);
  ASSERT_EQ(t.dim(), 3);
  EXPECT_EQ(t.vectors(1, 2), 3.25);
  EXPECT_EQ(t.vectors(0, 0), 0.5);
}

TEST(EmbeddingFileTest, RowCountMismatchIsAnError) {
  EXPECT_THROW(load_embedding_text(temp_file("short.txt", "3 2\n0 1 2\n1 3 4\n")), Error);
}

TEST(EmbeddingFileTest, WrongDimensionIsAnError) {
  EXPECT_THROW(load_embedding_text(temp_file("dim.txt", "2 2\n0 1 2\n1 3\n")), Error);
}

TEST(EmbeddingFileTest, NonFiniteValueIsAnError) {
  EXPECT_THROW(load_embedding_text(temp_file("nan.txt", "1 2\n0 nan 1\n")), Error);
}

TEST(EmbeddingFileTest, UnknownAndMissingItemsAreNamed) {
  IdMap items;
  items.intern("a");
  items.intern("b");
  try {
    load_embedding_text(temp_file("unknown.txt", "2 1\na 1\nzz 2\n"), &items);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
  try {
    load_embedding_text(temp_file("missing.txt", "1 1\na 1\n"), &items);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
  }
}

TEST(EmbeddingFileTest, RawIdsMapToDenseRows) {
  IdMap items;
  items.intern("x");
  items.intern("y");
  const auto t = load_embedding_text(temp_file("raw.txt", "2 2\ny 3 4\nx 1 2\n"), &items);
  EXPECT_EQ(t.vectors(0, 0), 1);
  EXPECT_EQ(t.vectors(1, 1), 4);
}

TEST(EmbeddingFileTest, BinaryRoundTripIsBitwiseInFloat32) {
  Rng rng(3);
  std::normal_distribution<Real> n(0, 1);
  EmbeddingTable t{Matrix(17, 9)};
  for (Eigen::Index i = 0; i < t.vectors.size(); ++i) t.vectors.data()[i] = n(rng);
  const auto p = temp_file("rt.lrde");
  save_embedding_binary(t, p);
  const auto back = load_embedding_file(p);
  ASSERT_EQ(back.size(), 17);
  ASSERT_EQ(back.dim(), 9);
  for (Eigen::Index i = 0; i < t.vectors.size(); ++i) {
    const float want = static_cast<float>(t.vectors.data()[i]);
    const float got = static_cast<float>(back.vectors.data()[i]);
    EXPECT_EQ(std::memcmp(&want, &got, sizeof(float)), 0);
    EXPECT_EQ(static_cast<double>(got), back.vectors.data()[i]);  // loaded values are exact f32
  }
  const auto p2 = temp_file("rt2.lrde");
  save_embedding_binary(back, p2);
  EXPECT_EQ(read_file(p), read_file(p2));
}

TEST(EmbeddingFileTest, TextRoundTrip) {
  EmbeddingTable t{Matrix(3, 2)};
  t.vectors << 0.1, -2.5, 1e-7, 3, 4, 5.125;
  const auto p = temp_file("rt.txt");
  save_embedding_text(t, p);
  EXPECT_EQ(load_embedding_file(p).vectors, t.vectors);
}

TEST(EmbeddingFileTest, TruncatedBinaryIsAnError) {
  EmbeddingTable t{Matrix::Ones(4, 4)};
  const auto p = temp_file("trunc.lrde");
  save_embedding_binary(t, p);
  const auto bytes = read_file(p);
  write_file_atomic(p, bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(load_embedding_binary(p), Error);
}

TEST(FallbackEncoderTest, Deterministic) {
  EXPECT_EQ(hash_fallback_encoder("Toy Story (1995) Animation", 32, 7),
            hash_fallback_encoder("Toy Story (1995) Animation", 32, 7));
  EXPECT_NE(hash_fallback_encoder("Toy Story", 32, 7), hash_fallback_encoder("Toy Story", 32, 8));
}

TEST(FallbackEncoderTest, EmptyTextIsZero) {
  EXPECT_EQ(hash_fallback_encoder("", 16, 1), Vector::Zero(16));
  EXPECT_EQ(hash_fallback_encoder(" ,;  ", 16, 1), Vector::Zero(16));
}

TEST(FallbackEncoderTest, UnitNormAndCaseInsensitive) {
  const auto v = hash_fallback_encoder("Heat", 24, 2);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  EXPECT_EQ(v, hash_fallback_encoder("heat", 24, 2));
}

TEST(FallbackEncoderTest, TokenOrderDoesNotMatter) {
  EXPECT_TRUE(hash_fallback_encoder("alpha beta gamma beta", 20, 4)
                  .isApprox(hash_fallback_encoder("beta gamma, beta alpha", 20, 4), 1e-14));
}

TEST(FallbackEncoderTest, SharedTokensGiveHigherCosineThanDisjoint) {
  Rng rng(17);
  std::uniform_int_distribution<int> word(0, 1000000);
  const HashTextEncoder enc(64, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> base;
    for (int k = 0; k < 20; ++k) base.push_back("t" + std::to_string(word(rng)));
    std::string a, b, c, d;
    for (int k = 0; k < 20; ++k) {
      a += base[static_cast<std::size_t>(k)] + ' ';
      // 18 of 20 tokens shared.
      b += (k < 18 ? base[static_cast<std::size_t>(k)] : "s" + std::to_string(word(rng))) + ' ';
      c += "p" + std::to_string(word(rng)) + ' ';
      d += "q" + std::to_string(word(rng)) + ' ';
    }
    EXPECT_GT(cosine(enc.encode(a), enc.encode(b)), cosine(enc.encode(c), enc.encode(d))) << "trial " << trial;
  }
}

TEST(FallbackEncoderTest, TokenizerSplitsOnPunctuation) {
  EXPECT_EQ(HashTextEncoder::tokenize("GoldenEye (1995) Action|Thriller"),
            (std::vector<std::string>{"goldeneye", "1995", "action", "thriller"}));
}

TEST(ProjectTest, IdentityAndZero) {
  Projection p{Matrix::Identity(3, 3), Vector::Zero(3)};
  const Vector x = Vector::Random(3);
  EXPECT_EQ(project(x, p), x);
  p.bias = Vector::LinSpaced(3, 1, 3);
  EXPECT_EQ(project(Vector::Zero(3), p), p.bias);
}

TEST(ProjectTest, HandComputedExample) {
  Projection p{Matrix(3, 2), Vector(2)};
  p.weight << 1, 0, 0, 2, 1, 1;
  p.bias << 1, -1;
  Vector x(3);
  x << 1, 1, 1;
  Vector expected(2);
  expected << 3, 2;
  EXPECT_EQ(project(x, p), expected);
  // Independent loop matmul.
  Vector loop = p.bias;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 3; ++i) loop[j] += x[i] * p.weight(i, j);
  }
  EXPECT_EQ(project(x, p), loop);
}

TEST(ProjectTest, ShapeMismatchIsAnError) {
  Projection p{Matrix::Zero(3, 2), Vector::Zero(2)};
  EXPECT_THROW(project(Vector::Zero(4), p), Error);
}

TEST(ProjectTest, AffineInRandomDirections) {
  Rng rng(9);
  std::uniform_real_distribution<Real> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    Projection p{Matrix(6, 4), Vector(4)};
    for (Eigen::Index i = 0; i < p.weight.size(); ++i) p.weight.data()[i] = u(rng);
    for (Eigen::Index i = 0; i < 4; ++i) p.bias[i] = u(rng);
    Vector x(6), y(6);
    for (Eigen::Index i = 0; i < 6; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
    }
    const Real a = u(rng);
    const Vector lhs = project(a * x + (1 - a) * y, p);
    const Vector rhs = a * project(x, p) + (1 - a) * project(y, p);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

}  // namespace
}  // namespace lrd
