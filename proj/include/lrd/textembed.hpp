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

#include "lrd/common.hpp"
#include "lrd/corpus.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lrd {

// Frozen text-derived item vectors, one row per dense item ID.
struct EmbeddingTable {
  Matrix vectors;

  Eigen::Index size() const { return vectors.rows(); }
  Eigen::Index dim() const { return vectors.cols(); }
};

// Affine map from text space (d_L) to model space (d): e = raw * W + b.
struct Projection {
  Matrix weight;  // d_L x d
  Vector bias;    // d
};

Vector project(const Vector& raw, const Projection& p);

// Text format: "<count> <d_L>" header, then "<item> v_1 ... v_dL" rows.
// When `items` is given, row keys are raw item IDs and every vocabulary item
// must appear; otherwise keys are dense indices in [0, count).
EmbeddingTable load_embedding_text(const std::string& path, const IdMap* items = nullptr);
void save_embedding_text(const EmbeddingTable& table, const std::string& path,
                         const IdMap* items = nullptr);

// Binary format: "LRDE", u32 count, u32 d_L, little-endian f32 row-major.
EmbeddingTable load_embedding_binary(const std::string& path);
void save_embedding_binary(const EmbeddingTable& table, const std::string& path);

// Dispatches on the magic bytes.
EmbeddingTable load_embedding_file(const std::string& path, const IdMap* items = nullptr);

// Offline stand-in for a text embedding service: tokens (lowercased,
// split on anything that is not alphanumeric) map to seeded Gaussian vectors,
// which are mean-pooled and L2-normalized. Empty text gives the zero vector.
class HashTextEncoder {
 public:
  HashTextEncoder(int dim, std::uint64_t seed);

  Vector encode(std::string_view text) const;
  EmbeddingTable encode_all(const std::vector<std::string>& texts) const;

  static std::vector<std::string> tokenize(std::string_view text);

 private:
  const Vector& token_vector(const std::string& token) const;

  int dim_;
  std::uint64_t seed_;
  mutable std::unordered_map<std::string, Vector> cache_;
};

inline Vector hash_fallback_encoder(std::string_view text, int dim, std::uint64_t seed) {
  return HashTextEncoder(dim, seed).encode(text);
}

// Client for an OpenAI-compatible embeddings endpoint
// (POST <endpoint>/embeddings, {"model", "input": [...]}).
struct EmbeddingServiceConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "text-embedding-ada-002";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string cache_dir = ".lrd_embed_cache";
  int batch = 64;
  int max_retries = 5;
  std::chrono::milliseconds base_backoff{500};
  int max_inflight = 1;
  int timeout_seconds = 60;
};

class EmbeddingClient {
 public:
  explicit EmbeddingClient(EmbeddingServiceConfig config);

  // One row per input text. Cached vectors are reused; the rest are fetched
  // in batches and written through to the cache.
  EmbeddingTable fetch(const std::vector<std::string>& texts);

  // HTTP requests issued so far, retries included.
  int requests_sent() const { return requests_.load(); }

 private:
  std::vector<std::vector<float>> request_batch(const std::vector<std::string>& texts);
  std::string cache_path(const std::string& text) const;

  EmbeddingServiceConfig config_;
  std::string api_key_;
  std::atomic<int> requests_{0};
};

}  // namespace lrd
