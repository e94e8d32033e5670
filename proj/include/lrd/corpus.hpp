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

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lrd {

struct Interaction {
  UserId user = 0;
  ItemId item = 0;
  std::int64_t timestamp = 0;

  bool operator==(const Interaction&) const = default;
};

// Bidirectional mapping between raw string IDs and dense indices.
class IdMap {
 public:
  // Returns the dense index for `raw`, assigning the next one on first sight.
  std::int32_t intern(const std::string& raw);
  std::optional<std::int32_t> find(const std::string& raw) const;
  const std::string& name(std::int32_t index) const { return names_.at(index); }
  std::int32_t size() const { return static_cast<std::int32_t>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::int32_t> index_;
};

struct InteractionLog {
  std::vector<Interaction> rows;
  IdMap users;
  IdMap items;
};

// Column layout of a delimited interaction file. Columns named "user",
// "item" and "timestamp" are required; any other name is ignored.
struct ColumnSpec {
  char delimiter = '\t';
  std::vector<std::string> columns{"user", "item", "timestamp"};
  bool has_header = false;

  // "user,item,rating,timestamp" style; an optional "header:" prefix marks a
  // header row to skip.
  static ColumnSpec parse(std::string_view spec, char delimiter = '\t');
};

InteractionLog load_interactions(const std::string& path, const ColumnSpec& format = {});

// Iterated k-core: drops users and items with fewer than k interactions until
// nothing changes, then re-densifies both index spaces.
InteractionLog kcore_filter(const InteractionLog& log, int k = 5);

struct UserSequence {
  UserId user = 0;
  std::vector<ItemId> items;

  std::size_t length() const { return items.size(); }
};

// Groups rows per user, ordered by timestamp (ties keep input order).
std::vector<UserSequence> build_sequences(const InteractionLog& log);

struct UserSplit {
  UserId user = 0;
  std::vector<ItemId> train;
  ItemId valid_target = 0;
  ItemId test_target = 0;
};

struct DatasetSplit {
  std::vector<UserSplit> users;
  std::size_t excluded_short = 0;
};

DatasetSplit leave_one_out_split(std::span<const UserSequence> sequences);

struct Triplet {
  ItemId head = 0;
  ItemId tail = 0;
  RelationId relation = 0;

  bool operator==(const Triplet&) const = default;
  auto operator<=>(const Triplet&) const = default;
};

struct RelationVocab {
  std::vector<std::string> predefined;
  int num_latent = 0;

  int num_predefined() const { return static_cast<int>(predefined.size()); }
  int total() const { return num_predefined() + num_latent; }
  bool is_latent(RelationId r) const { return r >= num_predefined(); }
  std::string name(RelationId r) const;
};

// Attribute values per item, indexed by dense item ID.
using ItemAttributes = std::vector<std::vector<std::string>>;

// Every ordered pair (i, j), i != j, sharing at least one value. Both
// directions are emitted. `max_per_item` keeps the first tails per head in
// ID order.
std::vector<Triplet> build_attribute_triplets(const ItemAttributes& attributes,
                                              RelationId relation,
                                              std::optional<std::size_t> max_per_item = {});

struct CooccurrenceResult {
  std::vector<Triplet> triplets;
  std::size_t dropped = 0;
};

// Pairs use dense IDs; a negative ID marks an endpoint that did not survive
// filtering. Self pairs and duplicates are removed.
CooccurrenceResult build_cooccurrence_triplets(std::span<const std::pair<ItemId, ItemId>> pairs,
                                               RelationId relation, ItemId num_items);

// Sorted, duplicate-free set of item IDs.
class ItemSet {
 public:
  ItemSet() = default;
  explicit ItemSet(std::vector<ItemId> items);

  bool contains(ItemId item) const;
  std::size_t size() const { return items_.size(); }
  std::span<const ItemId> items() const { return items_; }

 private:
  std::vector<ItemId> items_;
};

// Uniform draw from [0, num_items) \ exclude.
ItemId sample_negative_item(const ItemSet& exclude, ItemId num_items, Rng& rng);

// `n` distinct items outside `history`; depends only on (seed, user, history).
std::vector<ItemId> sample_eval_negatives(const ItemSet& history, ItemId num_items, std::size_t n,
                                          std::uint64_t seed, UserId user);

// The most recent min(position, max_len) items before `position`, oldest first.
std::span<const ItemId> history_window(std::span<const ItemId> items, std::size_t position,
                                       std::size_t max_len = 20);

// item<TAB>text rows keyed by raw item ID.
std::unordered_map<std::string, std::string> load_item_text(const std::string& path);

// item<TAB>attribute<TAB>value rows: attribute -> raw item -> values.
std::map<std::string, std::unordered_map<std::string, std::vector<std::string>>> load_metadata(
    const std::string& path);

struct RawCooccurrence {
  std::string head, tail, relation;
};
std::vector<RawCooccurrence> load_cooccurrence(const std::string& path);

// Everything the trainer and evaluator consume, produced by `prepare`.
struct Dataset {
  IdMap users;
  IdMap items;
  std::vector<UserSequence> sequences;
  DatasetSplit split;
  std::vector<std::string> item_text;
  RelationVocab relations;  // predefined part only; latent count is a model choice
  std::vector<Triplet> triplets;
  // Parallel to split.users.
  std::vector<std::vector<ItemId>> valid_negatives;
  std::vector<std::vector<ItemId>> test_negatives;
  std::size_t num_interactions = 0;

  ItemId num_items() const { return items.size(); }
  UserId num_users() const { return users.size(); }
};

struct PrepareOptions {
  std::string interactions;
  ColumnSpec columns;
  std::string item_text;      // optional
  std::string metadata;       // optional
  std::string cooccurrence;   // optional
  std::vector<std::string> attribute_relations;  // empty = every attribute in metadata
  int kcore = 5;
  std::optional<std::size_t> max_triplets_per_item;
  std::size_t eval_negatives = 99;
  std::uint64_t negative_seed = 0;
};

Dataset prepare_dataset(const PrepareOptions& options);

// Sequences, split and blank item text for an already-filtered log; no
// triplets and no evaluation negatives.
Dataset dataset_from_log(InteractionLog log);

// Frozen evaluation candidates: separate valid/test streams, each excluding
// the user's whole history.
void draw_eval_negatives(Dataset& data, std::size_t n, std::uint64_t seed);

void save_dataset(const Dataset& data, const std::string& dir);
Dataset load_dataset(const std::string& dir);

// Fields mirror the usual dataset statistics table.
std::string dataset_stats_json(const Dataset& data);

}  // namespace lrd
