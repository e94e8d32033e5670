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

#include "lrd/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <vector>

namespace lrd {

namespace fs = std::filesystem;

std::string RunManifest::identity() const {
  nlohmann::json j = {{"command", command}, {"config", config}, {"seed", seed}, {"inputs", inputs}};
  return sha256_hex(j.dump());
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["identity"] = identity();
  j["seed"] = seed;
  j["config"] = config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["created_at"] = created_at;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.outputs = j.value("outputs", std::map<std::string, std::string>{});
    m.created_at = j.value("created_at", "");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed manifest: ") + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hash_directory(const std::string& dir, const std::string& exclude) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() != exclude) names.push_back(entry.path().filename());
  }
  std::sort(names.begin(), names.end());
  std::string acc;
  for (const auto& n : names) acc += n + '\0' + sha256_file((fs::path(dir) / n).string()) + '\n';
  return sha256_hex(acc);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  write_file_atomic(path, manifest.to_json());
}

std::optional<RunManifest> read_manifest(const std::string& path) {
  if (!fs::exists(path)) return std::nullopt;
  return RunManifest::from_json(read_file(path));
}

bool outputs_up_to_date(const std::string& dir, const RunManifest& manifest) {
  std::optional<RunManifest> previous;
  try {
    previous = read_manifest((fs::path(dir) / "manifest.json").string());
  } catch (const Error&) {
    return false;
  }
  if (!previous || previous->identity() != manifest.identity() || previous->outputs.empty()) return false;
  for (const auto& [name, hash] : previous->outputs) {
    const auto path = fs::path(dir) / name;
    if (!fs::exists(path) || sha256_file(path.string()) != hash) return false;
  }
  return true;
}

}  // namespace lrd
