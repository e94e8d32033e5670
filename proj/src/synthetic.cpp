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

#include "lrd/synthetic.hpp"

#include <algorithm>
#include <set>

namespace lrd {

PlantedData make_planted_dataset(const PlantedConfig& c) {
  if (c.num_relations < 1 || c.num_items < 8 * c.num_relations || c.seq_len < 3 || c.num_users < 1 ||
      c.window < 1 || c.feature_values < 2) {
    throw Error(ErrorKind::Validation, "planted dataset: need >= 1 relation, >= 8 items per relation, "
                                       "seq_len >= 3, window >= 1, feature_values >= 2");
  }
  const int num_features = c.num_relations;
  Rng rng(mix_seed(c.seed, 0x5eed));

  // Raw item i: kind i % K, features drawn uniformly.
  std::vector<int> kind(static_cast<std::size_t>(c.num_items));
  std::vector<std::vector<int>> feature(static_cast<std::size_t>(c.num_items), std::vector<int>(num_features));
  std::uniform_int_distribution<int> value(0, c.feature_values - 1);
  for (int i = 0; i < c.num_items; ++i) {
    kind[static_cast<std::size_t>(i)] = i % c.num_relations;
    for (auto& f : feature[static_cast<std::size_t>(i)]) f = value(rng);
  }
  const auto follows = [&](int h, int t) {
    if (h == t) return false;
    const auto k = kind[static_cast<std::size_t>(h)];
    const auto& fh = feature[static_cast<std::size_t>(h)];
    const auto& ft = feature[static_cast<std::size_t>(t)];
    for (int f = 0; f < num_features; ++f) {
      const bool same = fh[static_cast<std::size_t>(f)] == ft[static_cast<std::size_t>(f)];
      if (same != (f == k)) return false;
    }
    return true;
  };
  std::vector<std::vector<int>> successors(static_cast<std::size_t>(c.num_items));
  for (int h = 0; h < c.num_items; ++h) {
    for (int t = 0; t < c.num_items; ++t) {
      if (follows(h, t)) successors[static_cast<std::size_t>(h)].push_back(t);
    }
  }

  InteractionLog log;
  std::uniform_int_distribution<int> any_item(0, c.num_items - 1);
  for (int u = 0; u < c.num_users; ++u) {
    const auto user = log.users.intern("u" + std::to_string(u));
    std::set<int> visited;
    int current = any_item(rng);
    for (int t = 0; t < c.seq_len; ++t) {
      visited.insert(current);
      log.rows.push_back({user, log.items.intern("i" + std::to_string(current)), t});
      std::vector<int> options;
      for (int s : successors[static_cast<std::size_t>(current)]) {
        if (!visited.contains(s)) options.push_back(s);
      }
      if (options.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      current = options[pick(rng)];
    }
  }
  // Items never visited still belong to the catalog.
  for (int i = 0; i < c.num_items; ++i) log.items.intern("i" + std::to_string(i));
  PlantedData out;
  out.data = dataset_from_log(std::move(log));

  std::vector<int> raw_of(static_cast<std::size_t>(out.data.num_items()));
  for (ItemId i = 0; i < out.data.num_items(); ++i) {
    raw_of[static_cast<std::size_t>(i)] = std::stoi(out.data.items.name(i).substr(1));
    out.item_relation.push_back(kind[static_cast<std::size_t>(raw_of[static_cast<std::size_t>(i)])]);
    out.item_features.push_back(feature[static_cast<std::size_t>(raw_of[static_cast<std::size_t>(i)])]);
  }

  std::uniform_int_distribution<int> noise(0, c.noise_vocab - 1);
  for (ItemId i = 0; i < out.data.num_items(); ++i) {
    std::string text;
    const int k = out.item_relation[static_cast<std::size_t>(i)];
    for (int s = 0; s < c.signature_tokens; ++s) text += "sig" + std::to_string(k) + "x" + std::to_string(s) + ' ';
    for (int s = 0; s < c.noise_tokens; ++s) text += "w" + std::to_string(noise(rng)) + ' ';
    text.pop_back();
    out.data.item_text[static_cast<std::size_t>(i)] = text;
  }

  if (c.parity_relation) {
    ItemAttributes parity(static_cast<std::size_t>(out.data.num_items()));
    for (ItemId i = 0; i < out.data.num_items(); ++i) {
      parity[static_cast<std::size_t>(i)] = {raw_of[static_cast<std::size_t>(i)] % 2 ? "odd" : "even"};
    }
    out.data.relations.predefined.push_back("parity");
    out.data.triplets = build_attribute_triplets(parity, 0);
  }
  draw_eval_negatives(out.data, c.eval_negatives, mix_seed(c.seed, 0xe7a1));

  const auto seen = training_window_pairs(out.data, c.window);
  const std::set<ItemPair> seen_set(seen.begin(), seen.end());
  std::set<ItemPair> chosen;
  std::uniform_int_distribution<ItemId> pick_item(0, out.data.num_items() - 1);
  const std::size_t budget = static_cast<std::size_t>(c.heldout_pairs) * 1000;
  for (std::size_t attempt = 0; attempt < budget && static_cast<int>(chosen.size()) < c.heldout_pairs; ++attempt) {
    const ItemPair p{pick_item(rng), pick_item(rng)};
    if (!follows(raw_of[static_cast<std::size_t>(p.first)], raw_of[static_cast<std::size_t>(p.second)])) continue;
    if (seen_set.contains(p) || !chosen.insert(p).second) continue;
    out.heldout.push_back(p);
    out.heldout_labels.push_back(out.item_relation[static_cast<std::size_t>(p.first)]);
  }
  return out;
}

PlantedData make_fixture_dataset(std::uint64_t seed) {
  PlantedConfig c;
  c.num_items = 60;
  c.num_relations = 2;
  c.num_users = 30;
  c.seq_len = 10;
  c.noise_vocab = 40;
  c.heldout_pairs = 30;
  c.parity_relation = true;
  c.eval_negatives = 20;
  c.seed = seed;
  return make_planted_dataset(c);
}

}  // namespace lrd
