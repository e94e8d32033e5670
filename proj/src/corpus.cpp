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

#include "lrd/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace lrd {

namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Accepts integral or decimal timestamps ("881250949" or "881250949.0").
bool parse_timestamp(std::string_view s, std::int64_t& out) {
  if (parse_number(s, out)) return true;
  double d = 0;
  if (!parse_number(s, d)) return false;
  out = static_cast<std::int64_t>(d);
  return true;
}

template <typename T>
T parse_or_throw(std::string_view s, const std::string& where) {
  T value{};
  if (!parse_number(s, value)) {
    throw Error(ErrorKind::Parse, where + ": bad number '" + std::string(s) + "'");
  }
  return value;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return in;
}

std::string sanitize_field(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return s;
}

}  // namespace

std::int32_t IdMap::intern(const std::string& raw) {
  auto [it, inserted] = index_.try_emplace(raw, static_cast<std::int32_t>(names_.size()));
  if (inserted) names_.push_back(raw);
  return it->second;
}

std::optional<std::int32_t> IdMap::find(const std::string& raw) const {
  auto it = index_.find(raw);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ColumnSpec ColumnSpec::parse(std::string_view spec, char delimiter) {
  ColumnSpec out;
  out.delimiter = delimiter;
  out.columns.clear();
  if (spec.starts_with("header:")) {
    out.has_header = true;
    spec.remove_prefix(7);
  }
  for (auto name : split(spec, ',')) out.columns.emplace_back(trim(name));
  for (const char* required : {"user", "item", "timestamp"}) {
    if (std::find(out.columns.begin(), out.columns.end(), required) == out.columns.end()) {
      throw Error(ErrorKind::Validation, std::string("column spec lacks '") + required + "'");
    }
  }
  return out;
}

InteractionLog load_interactions(const std::string& path, const ColumnSpec& format) {
  auto in = open_or_throw(path);
  auto column_of = [&](const char* name) {
    return static_cast<std::size_t>(
        std::find(format.columns.begin(), format.columns.end(), name) - format.columns.begin());
  };
  const std::size_t ucol = column_of("user"), icol = column_of("item"), tcol = column_of("timestamp");
  const std::size_t needed = std::max({ucol, icol, tcol}) + 1;

  InteractionLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && format.has_header) continue;
    const auto view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view, format.delimiter);
    if (fields.size() < needed) {
      throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected " +
                                        std::to_string(needed) + " columns, got " +
                                        std::to_string(fields.size()));
    }
    Interaction row;
    if (!parse_timestamp(fields[tcol], row.timestamp)) {
      throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": bad timestamp '" +
                                        std::string(fields[tcol]) + "'");
    }
    const auto user = trim(fields[ucol]);
    const auto item = trim(fields[icol]);
    if (user.empty() || item.empty()) {
      throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": empty id");
    }
    row.user = log.users.intern(std::string(user));
    row.item = log.items.intern(std::string(item));
    log.rows.push_back(row);
  }
  if (log.rows.empty()) throw Error(ErrorKind::Data, "no interactions in " + path);
  return log;
}

InteractionLog kcore_filter(const InteractionLog& log, int k) {
  if (k < 1) throw Error(ErrorKind::Validation, "k-core requires k >= 1");
  std::vector<char> alive(log.rows.size(), 1);
  std::vector<int> user_count(log.users.size()), item_count(log.items.size());
  for (const auto& r : log.rows) {
    ++user_count[r.user];
    ++item_count[r.item];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
      if (!alive[i]) continue;
      const auto& r = log.rows[i];
      if (user_count[r.user] < k || item_count[r.item] < k) {
        alive[i] = 0;
        --user_count[r.user];
        --item_count[r.item];
        changed = true;
      }
    }
  }
  InteractionLog out;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    if (!alive[i]) continue;
    const auto& r = log.rows[i];
    out.rows.push_back({out.users.intern(log.users.name(r.user)),
                        out.items.intern(log.items.name(r.item)), r.timestamp});
  }
  if (out.rows.empty()) throw Error(ErrorKind::Data, "k-core eliminated all data");
  return out;
}

std::vector<UserSequence> build_sequences(const InteractionLog& log) {
  std::vector<std::vector<std::size_t>> rows_of(log.users.size());
  for (std::size_t i = 0; i < log.rows.size(); ++i) rows_of[log.rows[i].user].push_back(i);
  std::vector<UserSequence> out(rows_of.size());
  for (std::size_t u = 0; u < rows_of.size(); ++u) {
    auto& idx = rows_of[u];
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return log.rows[a].timestamp < log.rows[b].timestamp;
    });
    out[u].user = static_cast<UserId>(u);
    out[u].items.reserve(idx.size());
    for (auto i : idx) out[u].items.push_back(log.rows[i].item);
  }
  return out;
}

DatasetSplit leave_one_out_split(std::span<const UserSequence> sequences) {
  DatasetSplit split;
  for (const auto& seq : sequences) {
    const std::size_t n = seq.items.size();
    if (n < 3) {
      ++split.excluded_short;
      continue;
    }
    UserSplit us;
    us.user = seq.user;
    us.train.assign(seq.items.begin(), seq.items.end() - 2);
    us.valid_target = seq.items[n - 2];
    us.test_target = seq.items[n - 1];
    split.users.push_back(std::move(us));
  }
  if (split.excluded_short > 0) {
    std::cerr << "warning: " << split.excluded_short
              << " sequence(s) shorter than 3 excluded from the split\n";
  }
  return split;
}

std::string RelationVocab::name(RelationId r) const {
  if (r < num_predefined()) return predefined[static_cast<std::size_t>(r)];
  return "latent_" + std::to_string(r - num_predefined());
}

std::vector<Triplet> build_attribute_triplets(const ItemAttributes& attributes, RelationId relation,
                                              std::optional<std::size_t> max_per_item) {
  std::map<std::string, std::vector<ItemId>> by_value;
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    for (const auto& v : attributes[i]) by_value[v].push_back(static_cast<ItemId>(i));
  }
  std::vector<std::uint64_t> keys;
  for (auto& [value, items] : by_value) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    for (ItemId a : items) {
      for (ItemId b : items) {
        if (a != b) keys.push_back((static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b));
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<Triplet> out;
  out.reserve(keys.size());
  ItemId current = -1;
  std::size_t kept = 0;
  for (auto key : keys) {
    const auto head = static_cast<ItemId>(key >> 32);
    const auto tail = static_cast<ItemId>(key & 0xffffffffu);
    if (head != current) {
      current = head;
      kept = 0;
    }
    if (max_per_item && kept >= *max_per_item) continue;
    ++kept;
    out.push_back({head, tail, relation});
  }
  return out;
}

CooccurrenceResult build_cooccurrence_triplets(std::span<const std::pair<ItemId, ItemId>> pairs,
                                               RelationId relation, ItemId num_items) {
  CooccurrenceResult result;
  for (const auto& [h, t] : pairs) {
    if (h < 0 || t < 0 || h >= num_items || t >= num_items || h == t) {
      ++result.dropped;
      continue;
    }
    result.triplets.push_back({h, t, relation});
  }
  std::sort(result.triplets.begin(), result.triplets.end());
  result.triplets.erase(std::unique(result.triplets.begin(), result.triplets.end()),
                        result.triplets.end());
  return result;
}

ItemSet::ItemSet(std::vector<ItemId> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool ItemSet::contains(ItemId item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

ItemId sample_negative_item(const ItemSet& exclude, ItemId num_items, Rng& rng) {
  const auto in_range = static_cast<std::size_t>(
      std::lower_bound(exclude.items().begin(), exclude.items().end(), num_items) -
      std::lower_bound(exclude.items().begin(), exclude.items().end(), 0));
  if (num_items <= 0 || in_range >= static_cast<std::size_t>(num_items)) {
    throw Error(ErrorKind::Data, "negative sampling: exclusion set covers all " +
                                     std::to_string(num_items) + " items");
  }
  std::uniform_int_distribution<ItemId> pick(0, num_items - 1);
  if (in_range * 2 <= static_cast<std::size_t>(num_items)) {
    while (true) {
      const ItemId c = pick(rng);
      if (!exclude.contains(c)) return c;
    }
  }
  // Dense exclusion: pick the k-th eligible item directly.
  std::uniform_int_distribution<std::size_t> rank(0, static_cast<std::size_t>(num_items) - in_range - 1);
  std::size_t k = rank(rng);
  for (ItemId c = 0; c < num_items; ++c) {
    if (exclude.contains(c)) continue;
    if (k-- == 0) return c;
  }
  throw Error(ErrorKind::Data, "negative sampling: unreachable");
}

std::vector<ItemId> sample_eval_negatives(const ItemSet& history, ItemId num_items, std::size_t n,
                                          std::uint64_t seed, UserId user) {
  std::size_t excluded = 0;
  for (ItemId h : history.items()) excluded += (h >= 0 && h < num_items);
  const std::size_t eligible = static_cast<std::size_t>(num_items) - excluded;
  if (eligible < n) {
    throw Error(ErrorKind::Data, "user " + std::to_string(user) + ": need " + std::to_string(n) +
                                     " negatives but only " + std::to_string(eligible) +
                                     " items are eligible");
  }
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(user)));
  std::vector<ItemId> out;
  out.reserve(n);
  if (eligible >= 2 * n) {
    std::vector<ItemId> taken;
    std::uniform_int_distribution<ItemId> pick(0, num_items - 1);
    while (out.size() < n) {
      const ItemId c = pick(rng);
      if (history.contains(c) || std::find(taken.begin(), taken.end(), c) != taken.end()) continue;
      taken.push_back(c);
      out.push_back(c);
    }
    return out;
  }
  std::vector<ItemId> pool;
  pool.reserve(eligible);
  for (ItemId c = 0; c < num_items; ++c) {
    if (!history.contains(c)) pool.push_back(c);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.push_back(pool[i]);
  }
  return out;
}

std::span<const ItemId> history_window(std::span<const ItemId> items, std::size_t position,
                                       std::size_t max_len) {
  if (position == 0) throw Error(ErrorKind::Validation, "history_window: position 0 has no history");
  if (position > items.size()) {
    throw Error(ErrorKind::Validation, "history_window: position " + std::to_string(position) +
                                           " beyond sequence of length " + std::to_string(items.size()));
  }
  const std::size_t len = std::min(position, max_len);
  return items.subspan(position - len, len);
}

std::unordered_map<std::string, std::string> load_item_text(const std::string& path) {
  auto in = open_or_throw(path);
  std::unordered_map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      out[line] = "";
      continue;
    }
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

std::map<std::string, std::unordered_map<std::string, std::vector<std::string>>> load_metadata(
    const std::string& path) {
  auto in = open_or_throw(path);
  std::map<std::string, std::unordered_map<std::string, std::vector<std::string>>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = trim(line);
    if (view.empty()) continue;
    const auto f = split(view, '\t');
    if (f.size() != 3) {
      throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) +
                                        ": expected item<TAB>attribute<TAB>value");
    }
    out[std::string(f[1])][std::string(f[0])].emplace_back(f[2]);
  }
  return out;
}

std::vector<RawCooccurrence> load_cooccurrence(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<RawCooccurrence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = trim(line);
    if (view.empty()) continue;
    const auto f = split(view, '\t');
    if (f.size() != 3) {
      throw Error(ErrorKind::Parse, path + ":" + std::to_string(lineno) +
                                        ": expected item<TAB>item<TAB>relation");
    }
    out.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2])});
  }
  return out;
}

void draw_eval_negatives(Dataset& data, std::size_t n, std::uint64_t seed) {
  data.valid_negatives.clear();
  data.test_negatives.clear();
  for (const auto& us : data.split.users) {
    const ItemSet history(data.sequences[static_cast<std::size_t>(us.user)].items);
    // Separate streams for the two targets; both exclude the whole history.
    data.valid_negatives.push_back(
        sample_eval_negatives(history, data.num_items(), n, mix_seed(seed, 1), us.user));
    data.test_negatives.push_back(
        sample_eval_negatives(history, data.num_items(), n, mix_seed(seed, 2), us.user));
  }
}

Dataset dataset_from_log(InteractionLog log) {
  Dataset data;
  data.num_interactions = log.rows.size();
  data.sequences = build_sequences(log);
  data.split = leave_one_out_split(data.sequences);
  data.users = std::move(log.users);
  data.items = std::move(log.items);
  data.item_text.assign(static_cast<std::size_t>(data.num_items()), "");
  return data;
}

Dataset prepare_dataset(const PrepareOptions& options) {
  const auto raw = load_interactions(options.interactions, options.columns);
  Dataset data = dataset_from_log(kcore_filter(raw, options.kcore));
  if (!options.item_text.empty()) {
    const auto texts = load_item_text(options.item_text);
    for (ItemId i = 0; i < data.num_items(); ++i) {
      auto it = texts.find(data.items.name(i));
      if (it != texts.end()) data.item_text[static_cast<std::size_t>(i)] = sanitize_field(it->second);
    }
  }

  if (!options.metadata.empty()) {
    const auto meta = load_metadata(options.metadata);
    std::vector<std::string> names = options.attribute_relations;
    if (names.empty()) {
      for (const auto& [attr, _] : meta) names.push_back(attr);
    }
    for (const auto& attr : names) {
      auto it = meta.find(attr);
      if (it == meta.end()) throw Error(ErrorKind::Data, "metadata has no attribute '" + attr + "'");
      ItemAttributes values(static_cast<std::size_t>(data.num_items()));
      for (const auto& [raw_item, vals] : it->second) {
        if (auto idx = data.items.find(raw_item)) values[static_cast<std::size_t>(*idx)] = vals;
      }
      const auto rel = static_cast<RelationId>(data.relations.predefined.size());
      data.relations.predefined.push_back(attr);
      auto triplets = build_attribute_triplets(values, rel, options.max_triplets_per_item);
      data.triplets.insert(data.triplets.end(), triplets.begin(), triplets.end());
    }
  }

  if (!options.cooccurrence.empty()) {
    std::map<std::string, std::vector<std::pair<ItemId, ItemId>>> by_relation;
    for (const auto& row : load_cooccurrence(options.cooccurrence)) {
      const auto h = data.items.find(row.head), t = data.items.find(row.tail);
      by_relation[row.relation].emplace_back(h.value_or(-1), t.value_or(-1));
    }
    for (const auto& [name, pairs] : by_relation) {
      const auto rel = static_cast<RelationId>(data.relations.predefined.size());
      data.relations.predefined.push_back(name);
      auto result = build_cooccurrence_triplets(pairs, rel, data.num_items());
      if (result.dropped > 0) {
        std::cerr << "warning: relation '" << name << "': dropped " << result.dropped
                  << " pair(s) with filtered-out or self endpoints\n";
      }
      data.triplets.insert(data.triplets.end(), result.triplets.begin(), result.triplets.end());
    }
  }

  draw_eval_negatives(data, options.eval_negatives, options.negative_seed);
  return data;
}

namespace {

std::string join_items(std::span<const ItemId> items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(items[i]);
  }
  return out;
}

std::vector<ItemId> parse_items(std::string_view s, const std::string& where) {
  std::vector<ItemId> out;
  for (auto tok : split(s, ' ')) {
    if (tok.empty()) continue;
    out.push_back(parse_or_throw<ItemId>(tok, where));
  }
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace

void save_dataset(const Dataset& data, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream users, items, seqs, rels, trip, negs;
  for (UserId u = 0; u < data.num_users(); ++u) users << u << '\t' << data.users.name(u) << '\n';
  for (ItemId i = 0; i < data.num_items(); ++i) {
    items << i << '\t' << data.items.name(i) << '\t' << data.item_text[static_cast<std::size_t>(i)] << '\n';
  }
  for (const auto& s : data.sequences) seqs << s.user << '\t' << join_items(s.items) << '\n';
  for (int r = 0; r < data.relations.num_predefined(); ++r) {
    rels << r << '\t' << data.relations.predefined[static_cast<std::size_t>(r)] << '\n';
  }
  for (const auto& t : data.triplets) trip << t.head << '\t' << t.tail << '\t' << t.relation << '\n';
  for (std::size_t k = 0; k < data.split.users.size(); ++k) {
    const auto u = data.split.users[k].user;
    negs << u << "\tvalid\t" << join_items(data.valid_negatives[k]) << '\n';
    negs << u << "\ttest\t" << join_items(data.test_negatives[k]) << '\n';
  }
  const fs::path base(dir);
  write_file_atomic((base / "users.tsv").string(), users.str());
  write_file_atomic((base / "items.tsv").string(), items.str());
  write_file_atomic((base / "sequences.tsv").string(), seqs.str());
  write_file_atomic((base / "relations.tsv").string(), rels.str());
  write_file_atomic((base / "triplets.tsv").string(), trip.str());
  write_file_atomic((base / "eval_negatives.tsv").string(), negs.str());
  write_file_atomic((base / "stats.json").string(), dataset_stats_json(data));
}

Dataset load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  Dataset data;
  for (const auto& line : read_lines((base / "users.tsv").string())) {
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    data.users.intern(std::string(f.at(1)));
  }
  for (const auto& line : read_lines((base / "items.tsv").string())) {
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    data.items.intern(std::string(f.at(1)));
    data.item_text.emplace_back(f.size() > 2 ? std::string(f[2]) : std::string());
  }
  const std::string seq_path = (base / "sequences.tsv").string();
  for (const auto& line : read_lines(seq_path)) {
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    UserSequence s;
    s.user = parse_or_throw<UserId>(f.at(0), seq_path);
    s.items = parse_items(f.size() > 1 ? f[1] : std::string_view{}, seq_path);
    data.num_interactions += s.items.size();
    data.sequences.push_back(std::move(s));
  }
  for (const auto& line : read_lines((base / "relations.tsv").string())) {
    if (line.empty()) continue;
    data.relations.predefined.emplace_back(split(line, '\t').at(1));
  }
  const std::string trip_path = (base / "triplets.tsv").string();
  {
    auto in = open_or_throw(trip_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split(line, '\t');
      data.triplets.push_back({parse_or_throw<ItemId>(f.at(0), trip_path),
                               parse_or_throw<ItemId>(f.at(1), trip_path),
                               parse_or_throw<RelationId>(f.at(2), trip_path)});
    }
  }
  data.split = leave_one_out_split(data.sequences);
  std::map<UserId, std::size_t> slot;
  for (std::size_t k = 0; k < data.split.users.size(); ++k) slot[data.split.users[k].user] = k;
  data.valid_negatives.resize(data.split.users.size());
  data.test_negatives.resize(data.split.users.size());
  const std::string neg_path = (base / "eval_negatives.tsv").string();
  for (const auto& line : read_lines(neg_path)) {
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    const auto u = parse_or_throw<UserId>(f.at(0), neg_path);
    auto it = slot.find(u);
    if (it == slot.end()) throw Error(ErrorKind::Data, neg_path + ": unknown user " + std::to_string(u));
    auto items = parse_items(f.at(2), neg_path);
    (f.at(1) == "valid" ? data.valid_negatives : data.test_negatives)[it->second] = std::move(items);
  }
  return data;
}

std::string dataset_stats_json(const Dataset& data) {
  const double users = data.num_users(), items = data.num_items();
  nlohmann::ordered_json j;
  j["#user"] = data.num_users();
  j["#item"] = data.num_items();
  j["#inter."] = data.num_interactions;
  j["density"] = users > 0 && items > 0 ? static_cast<double>(data.num_interactions) / (users * items) : 0.0;
  j["#relation"] = data.relations.num_predefined();
  j["#triplets"] = data.triplets.size();
  j["split_users"] = data.split.users.size();
  j["excluded_short"] = data.split.excluded_short;
  return j.dump(2) + "\n";
}

}  // namespace lrd
