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

#include <map>
#include <optional>
#include <string>

namespace lrd {

// Provenance record written next to every run's artifacts.
struct RunManifest {
  std::string command;
  std::string config;                         // canonical option text
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // logical name -> sha256
  std::map<std::string, std::string> outputs;  // file name -> sha256
  std::string created_at;                     // UTC, ISO-8601

  // sha256 over command, config, seed and inputs; timestamps and outputs
  // are excluded so reruns of the same job share an identity.
  std::string identity() const;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

std::string utc_timestamp();

// sha256 over (name, sha256) of every regular file directly inside `dir`,
// in name order, skipping `exclude`.
std::string hash_directory(const std::string& dir, const std::string& exclude = "manifest.json");

void write_manifest(const std::string& path, const RunManifest& manifest);
std::optional<RunManifest> read_manifest(const std::string& path);

// True when `dir/manifest.json` has `manifest`'s identity and every listed
// output still has its recorded hash.
bool outputs_up_to_date(const std::string& dir, const RunManifest& manifest);

}  // namespace lrd
