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

#include "lrd/trainer.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lrd {

// Raw key -> value pairs in file order of last assignment.
using ConfigValues = std::map<std::string, std::string, std::less<>>;

// Flat `key = value` text. '#' starts a comment; values may be quoted.
// Duplicate keys and malformed lines raise Error(Parse) with the line number.
ConfigValues parse_config_text(std::string_view text, const std::string& source = "<config>");

ConfigValues read_config_file(const std::string& path);

// Every recognised key with a one-line description, in reference order.
const std::vector<std::pair<std::string_view, std::string_view>>& config_keys();

// Defaults, then `file`, then `overrides`. Unknown keys and out-of-range
// values raise Error(Validation) naming the key.
TrainConfig build_config(const ConfigValues& file, const ConfigValues& overrides = {});

TrainConfig load_config(const std::string& path, const ConfigValues& overrides = {});

// Canonical `key = value` text covering every key; parses back to `config`.
std::string config_to_text(const TrainConfig& config);

}  // namespace lrd
