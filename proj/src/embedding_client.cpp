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

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <thread>

namespace lrd {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // prefix without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::Validation, "embedding endpoint must be an http(s) URL: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = url.substr(0, path_start);
  e.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
  return e;
}

bool is_transient(int status) { return status == 429 || status >= 500; }

std::vector<float> read_cached(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::vector<float> v;
  float f = 0;
  while (in.read(reinterpret_cast<char*>(&f), sizeof(float))) v.push_back(f);
  return v;
}

}  // namespace

EmbeddingClient::EmbeddingClient(EmbeddingServiceConfig config) : config_(std::move(config)) {
  if (config_.batch < 1) throw Error(ErrorKind::Validation, "embedding batch must be >= 1");
  if (config_.max_inflight < 1) throw Error(ErrorKind::Validation, "max_inflight must be >= 1");
  if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
}

std::string EmbeddingClient::cache_path(const std::string& text) const {
  const std::string key = sha256_hex(config_.model + '\0' + text);
  return (std::filesystem::path(config_.cache_dir) / (key + ".f32")).string();
}

std::vector<std::vector<float>> EmbeddingClient::request_batch(const std::vector<std::string>& texts) {
  const auto endpoint = split_endpoint(config_.endpoint);
  httplib::Client client(endpoint.origin);
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const nlohmann::json body = {{"model", config_.model}, {"input", texts}};
  const std::string payload = body.dump();

  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.base_backoff * (1 << (attempt - 1)));
    ++requests_;
    auto res = client.Post(endpoint.path + "/embeddings", headers, payload, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw Error(ErrorKind::Network, "embedding service rejected credentials (HTTP " +
                                          std::to_string(res->status) + "); check $" + config_.api_key_env);
    }
    if (is_transient(res->status)) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorKind::Network, "embedding service returned HTTP " + std::to_string(res->status) +
                                          ": " + res->body.substr(0, 200));
    }
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Network, std::string("embedding response is not JSON: ") + e.what());
    }
    std::vector<std::vector<float>> out(texts.size());
    const auto& data = reply.at("data");
    if (data.size() != texts.size()) {
      throw Error(ErrorKind::Network, "embedding response has " + std::to_string(data.size()) +
                                          " vectors for " + std::to_string(texts.size()) + " inputs");
    }
    for (std::size_t k = 0; k < data.size(); ++k) {
      const std::size_t index = data[k].contains("index") ? data[k]["index"].get<std::size_t>() : k;
      if (index >= out.size()) throw Error(ErrorKind::Network, "embedding response index out of range");
      out[index] = data[k].at("embedding").get<std::vector<float>>();
    }
    for (const auto& v : out) {
      if (v.empty() || v.size() != out.front().size()) {
        throw Error(ErrorKind::Network, "embedding dimensions disagree within a response (" +
                                            std::to_string(out.front().size()) + " vs " +
                                            std::to_string(v.size()) + ")");
      }
    }
    return out;
  }
  throw Error(ErrorKind::Network, "embedding service failed after " + std::to_string(config_.max_retries) +
                                      " retries: " + last_failure);
}

EmbeddingTable EmbeddingClient::fetch(const std::vector<std::string>& texts) {
  std::filesystem::create_directories(config_.cache_dir);
  std::map<std::string, std::vector<float>> vectors;
  std::vector<std::string> pending;
  for (const auto& t : texts) {
    if (vectors.contains(t)) continue;
    auto cached = read_cached(cache_path(t));
    if (cached.empty()) pending.push_back(t);
    vectors.emplace(t, std::move(cached));
  }

  std::vector<std::vector<std::string>> batches;
  for (std::size_t i = 0; i < pending.size(); i += static_cast<std::size_t>(config_.batch)) {
    const auto end = std::min(pending.size(), i + static_cast<std::size_t>(config_.batch));
    batches.emplace_back(pending.begin() + static_cast<std::ptrdiff_t>(i),
                         pending.begin() + static_cast<std::ptrdiff_t>(end));
  }
  std::mutex cache_mutex;
  auto run = [&](const std::vector<std::string>& batch) {
    auto got = request_batch(batch);
    std::lock_guard lock(cache_mutex);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const auto& v = got[k];
      write_file_atomic(cache_path(batch[k]),
                        std::string_view(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(float)));
      vectors[batch[k]] = std::move(got[k]);
    }
  };
  for (std::size_t i = 0; i < batches.size(); i += static_cast<std::size_t>(config_.max_inflight)) {
    std::vector<std::future<void>> wave;
    const auto end = std::min(batches.size(), i + static_cast<std::size_t>(config_.max_inflight));
    for (std::size_t b = i; b < end; ++b) wave.push_back(std::async(std::launch::async, run, std::cref(batches[b])));
    for (auto& f : wave) f.get();
  }

  std::size_t dim = 0;
  for (const auto& [_, v] : vectors) {
    if (dim == 0) dim = v.size();
    if (v.empty() || v.size() != dim) {
      throw Error(ErrorKind::Network, "embedding dimensions disagree across items (" + std::to_string(dim) +
                                          " vs " + std::to_string(v.size()) + ")");
    }
  }
  EmbeddingTable table{Matrix(static_cast<Eigen::Index>(texts.size()), static_cast<Eigen::Index>(dim))};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto& v = vectors.at(texts[i]);
    for (std::size_t k = 0; k < dim; ++k) table.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[k];
  }
  if (!table.vectors.allFinite()) throw Error(ErrorKind::Network, "embedding service returned non-finite values");
  return table;
}

}  // namespace lrd
