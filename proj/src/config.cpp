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

#include <charconv>
#include <cmath>
#include <sstream>

namespace lrd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(ErrorKind::Validation, "config key '" + std::string(key) + "': " + std::string(expected) +
                                         " (got '" + std::string(value) + "')");
}

double as_real(std::string_view key, std::string_view value) {
  // std::from_chars for double is available in GCC 11.
  double out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) bad_value(key, value, "expected a finite number");
  return out;
}

long long as_int(std::string_view key, std::string_view value) {
  long long out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "expected an integer");
  return out;
}

long long as_int_min(std::string_view key, std::string_view value, long long lo) {
  const auto v = as_int(key, value);
  if (v < lo) bad_value(key, value, "must be >= " + std::to_string(lo));
  return v;
}

double as_real_range(std::string_view key, std::string_view value, double lo, bool open_lo) {
  const auto v = as_real(key, value);
  if (open_lo ? !(v > lo) : !(v >= lo)) {
    std::ostringstream msg;
    msg << "must be " << (open_lo ? "> " : ">= ") << lo;
    bad_value(key, value, msg.str());
  }
  return v;
}

bool as_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "expected true or false");
}

// Shortest text that parses back to the same double.
std::string format_real(Real v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void apply(TrainConfig& c, std::string_view key, std::string_view value) {
  auto& m = c.model;
  if (key == "d") {
    m.dim = static_cast<int>(as_int_min(key, value, 1));
  } else if (key == "d_L") {
    m.text_dim = static_cast<int>(as_int_min(key, value, 1));
  } else if (key == "num_latent") {
    m.num_latent = static_cast<int>(as_int_min(key, value, 0));
  } else if (key == "agg") {
    try {
      m.agg = parse_agg_mode(value);
    } catch (const Error&) {
      bad_value(key, value, "expected mean or attention");
    }
  } else if (key == "attention_dim") {
    m.attention_dim = static_cast<int>(as_int_min(key, value, 0));
  } else if (key == "max_len") {
    m.max_len = static_cast<std::size_t>(as_int_min(key, value, 1));
  } else if (key == "lr") {
    c.lr = as_real_range(key, value, 0, true);
  } else if (key == "l2") {
    c.l2 = as_real_range(key, value, 0, false);
  } else if (key == "batch") {
    c.batch_size = static_cast<std::size_t>(as_int_min(key, value, 1));
  } else if (key == "gamma") {
    c.weights.gamma = as_real_range(key, value, 0, false);
  } else if (key == "lambda") {
    c.weights.lambda = as_real_range(key, value, 0, false);
  } else if (key == "alpha") {
    c.weights.alpha = as_real_range(key, value, 0, false);
  } else if (key == "patience") {
    c.patience = static_cast<std::size_t>(as_int_min(key, value, 1));
  } else if (key == "max_epochs") {
    c.max_epochs = static_cast<std::size_t>(as_int_min(key, value, 1));
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(as_int_min(key, value, 0));
  } else if (key == "kge_per_batch") {
    c.kge_per_batch = static_cast<std::size_t>(as_int_min(key, value, 0));
  } else if (key == "corrupt_both") {
    c.corrupt_both = as_bool(key, value);
  } else if (key == "freeze_projection") {
    c.freeze_projection = as_bool(key, value);
  } else if (key == "variant") {
    try {
      c.variant = parse_variant(value);
    } catch (const Error&) {
      bad_value(key, value, "expected full, no_llm, no_kge or no_lrd");
    }
  } else {
    throw Error(ErrorKind::Validation, "unknown config key '" + std::string(key) + "'");
  }
}

}  // namespace

const std::vector<std::pair<std::string_view, std::string_view>>& config_keys() {
  static const std::vector<std::pair<std::string_view, std::string_view>> keys{
      {"d", "embedding dimension (>= 1)"},
      {"d_L", "text vector dimension for the offline encoder (>= 1)"},
      {"num_latent", "number of latent relations (>= 0)"},
      {"agg", "relation aggregation: mean | attention"},
      {"attention_dim", "hidden size of attention aggregation; 0 = d"},
      {"max_len", "history window length (>= 1)"},
      {"lr", "Adam learning rate (> 0)"},
      {"l2", "L2 coefficient added to gradients (>= 0)"},
      {"batch", "training batch size (>= 1)"},
      {"gamma", "weight of the knowledge-graph loss (>= 0)"},
      {"lambda", "weight of the latent-relation loss (>= 0)"},
      {"alpha", "entropy regulariser weight (>= 0)"},
      {"patience", "early-stopping patience in epochs (>= 1)"},
      {"max_epochs", "epoch cap (>= 1)"},
      {"seed", "training seed (>= 0)"},
      {"kge_per_batch", "triplets sampled per batch; 0 = batch"},
      {"corrupt_both", "corrupt both triplet endpoints: true | false"},
      {"freeze_projection", "keep the text projection fixed: true | false"},
      {"variant", "full | no_llm | no_kge | no_lrd"},
  };
  return keys;
}

ConfigValues parse_config_text(std::string_view text, const std::string& source) {
  ConfigValues out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto where = source + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::Parse, where + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::Parse, where + ": empty key");
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (!out.emplace(std::string(key), std::string(value)).second) {
      throw Error(ErrorKind::Parse, where + ": duplicate key '" + std::string(key) + "'");
    }
  }
  return out;
}

ConfigValues read_config_file(const std::string& path) { return parse_config_text(read_file(path), path); }

TrainConfig build_config(const ConfigValues& file, const ConfigValues& overrides) {
  TrainConfig config;
  for (const auto& [k, v] : file) apply(config, k, v);
  for (const auto& [k, v] : overrides) apply(config, k, v);
  config.validate();
  return config;
}

TrainConfig load_config(const std::string& path, const ConfigValues& overrides) {
  return build_config(read_config_file(path), overrides);
}

std::string config_to_text(const TrainConfig& c) {
  std::ostringstream out;
  out << "d = " << c.model.dim << '\n'
      << "d_L = " << c.model.text_dim << '\n'
      << "num_latent = " << c.model.num_latent << '\n'
      << "agg = " << to_string(c.model.agg) << '\n'
      << "attention_dim = " << c.model.attention_dim << '\n'
      << "max_len = " << c.model.max_len << '\n'
      << "lr = " << format_real(c.lr) << '\n'
      << "l2 = " << format_real(c.l2) << '\n'
      << "batch = " << c.batch_size << '\n'
      << "gamma = " << format_real(c.weights.gamma) << '\n'
      << "lambda = " << format_real(c.weights.lambda) << '\n'
      << "alpha = " << format_real(c.weights.alpha) << '\n'
      << "patience = " << c.patience << '\n'
      << "max_epochs = " << c.max_epochs << '\n'
      << "seed = " << c.seed << '\n'
      << "kge_per_batch = " << c.kge_per_batch << '\n'
      << "corrupt_both = " << (c.corrupt_both ? "true" : "false") << '\n'
      << "freeze_projection = " << (c.freeze_projection ? "true" : "false") << '\n'
      << "variant = " << to_string(c.variant) << '\n';
  return out.str();
}

}  // namespace lrd
