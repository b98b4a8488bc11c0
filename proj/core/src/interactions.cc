// Copyright 2026 The SAERS Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "saers/interactions.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "saers/error.h"

namespace saers {
namespace {

int FindSorted(const std::vector<std::string>& ids, std::string_view id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return -1;
  return static_cast<int>(it - ids.begin());
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

SplitDataset AssembleSplit(const InteractionDataset& ds, std::vector<std::int32_t> val,
                           std::vector<std::int32_t> test, std::uint64_t seed) {
  SplitDataset split;
  split.full = ds;
  split.seed = seed;
  std::vector<std::vector<std::int32_t>> train_items(static_cast<std::size_t>(ds.num_users()));
  for (int u = 0; u < ds.num_users(); ++u) {
    const auto uu = static_cast<std::size_t>(u);
    if (val[uu] == test[uu]) throw DataError("user '" + ds.user_id(u) + "': validation item equals test item");
    if (!ds.Contains(u, val[uu]) || !ds.Contains(u, test[uu])) {
      throw DataError("user '" + ds.user_id(u) + "': held-out item is not one of the user's interactions");
    }
    for (std::int32_t i : ds.items_of(u)) {
      if (i != val[uu] && i != test[uu]) train_items[uu].push_back(i);
    }
  }
  split.train = InteractionDataset(ds.user_ids(), ds.item_ids(), std::move(train_items));
  split.val_item = std::move(val);
  split.test_item = std::move(test);
  split.cold.assign(static_cast<std::size_t>(ds.num_items()), false);
  for (int i = 0; i < ds.num_items(); ++i) split.cold[static_cast<std::size_t>(i)] = split.train.popularity(i) == 0;
  return split;
}

}  // namespace

InteractionDataset::InteractionDataset(std::vector<std::string> user_ids, std::vector<std::string> item_ids,
                                       std::vector<std::vector<std::int32_t>> user_items)
    : user_ids_(std::move(user_ids)), item_ids_(std::move(item_ids)), user_items_(std::move(user_items)) {
  if (user_items_.size() != user_ids_.size()) throw DataError("user table size mismatch");
  if (!std::is_sorted(user_ids_.begin(), user_ids_.end()) || !std::is_sorted(item_ids_.begin(), item_ids_.end())) {
    throw DataError("user and item ids must be sorted");
  }
  counts_.assign(item_ids_.size(), 0);
  for (auto& items : user_items_) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    for (std::int32_t i : items) {
      if (i < 0 || static_cast<std::size_t>(i) >= item_ids_.size()) throw DataError("item index out of range");
      ++counts_[static_cast<std::size_t>(i)];
    }
    num_interactions_ += items.size();
  }
}

bool InteractionDataset::Contains(int u, int i) const {
  const auto& items = items_of(u);
  return std::binary_search(items.begin(), items.end(), i);
}

int InteractionDataset::FindUser(std::string_view id) const { return FindSorted(user_ids_, id); }
int InteractionDataset::FindItem(std::string_view id) const { return FindSorted(item_ids_, id); }

InteractionDataset ParseInteractions(std::string_view text, int min_user_interactions) {
  std::map<std::string, std::set<std::string>> by_user;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw FormatError("interactions line " + std::to_string(line_no) + ": expected user_id<TAB>item_id");
    }
    const std::string_view user = Trim(line.substr(0, tab));
    const std::string_view item = Trim(line.substr(tab + 1));
    if (user.empty() || item.empty()) {
      throw FormatError("interactions line " + std::to_string(line_no) + ": empty id");
    }
    by_user[std::string(user)].emplace(item);
  }

  std::vector<std::string> users;
  std::set<std::string> item_set;
  for (const auto& [u, items] : by_user) {
    if (static_cast<int>(items.size()) < min_user_interactions) continue;
    users.push_back(u);
    item_set.insert(items.begin(), items.end());
  }
  if (users.empty()) throw DataError("no users left after filtering interactions");
  std::vector<std::string> items(item_set.begin(), item_set.end());
  std::vector<std::vector<std::int32_t>> user_items;
  user_items.reserve(users.size());
  for (const std::string& u : users) {
    std::vector<std::int32_t> idx;
    for (const std::string& i : by_user[u]) idx.push_back(FindSorted(items, i));
    user_items.push_back(std::move(idx));
  }
  return InteractionDataset(std::move(users), std::move(items), std::move(user_items));
}

InteractionDataset LoadInteractions(const std::filesystem::path& path, int min_user_interactions) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open interactions file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseInteractions(buf.str(), min_user_interactions);
}

void WriteInteractions(const InteractionDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (int u = 0; u < ds.num_users(); ++u) {
    for (std::int32_t i : ds.items_of(u)) out << ds.user_id(u) << '\t' << ds.item_id(i) << '\n';
  }
}

std::vector<std::int32_t> SplitDataset::cold_items() const {
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i < cold.size(); ++i) {
    if (cold[i]) out.push_back(static_cast<std::int32_t>(i));
  }
  return out;
}

SplitDataset SplitLeaveOneOut(const InteractionDataset& ds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::int32_t> val(static_cast<std::size_t>(ds.num_users()));
  std::vector<std::int32_t> test(val.size());
  for (int u = 0; u < ds.num_users(); ++u) {
    const auto& items = ds.items_of(u);
    if (items.size() < 2) throw DataError("user '" + ds.user_id(u) + "' has fewer than 2 items; cannot split");
    const std::size_t n = items.size();
    const std::size_t v = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::size_t t = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
    if (t >= v) ++t;
    val[static_cast<std::size_t>(u)] = items[v];
    test[static_cast<std::size_t>(u)] = items[t];
  }
  return AssembleSplit(ds, std::move(val), std::move(test), seed);
}

std::string SplitToJson(const SplitDataset& split) {
  nlohmann::ordered_json j;
  j["seed"] = split.seed;
  j["val"] = nlohmann::ordered_json::object();
  j["test"] = nlohmann::ordered_json::object();
  for (int u = 0; u < split.num_users(); ++u) {
    j["val"][split.full.user_id(u)] = split.full.item_id(split.val_item[static_cast<std::size_t>(u)]);
    j["test"][split.full.user_id(u)] = split.full.item_id(split.test_item[static_cast<std::size_t>(u)]);
  }
  return j.dump(2) + "\n";
}

SplitDataset SplitFromJson(const InteractionDataset& ds, std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("split file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("seed") || !j["seed"].is_number_unsigned() || !j.contains("val") ||
      !j["val"].is_object() || !j.contains("test") || !j["test"].is_object()) {
    throw DataError("split file must be {\"seed\": int, \"val\": {...}, \"test\": {...}}");
  }
  const auto n = static_cast<std::size_t>(ds.num_users());
  std::vector<std::int32_t> val(n, -1), test(n, -1);
  for (const char* key : {"val", "test"}) {
    auto& target = std::string_view(key) == "val" ? val : test;
    const auto& obj = j[key];
    if (obj.size() != n) throw DataError(std::string("split file: '") + key + "' must list every user");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const int u = ds.FindUser(it.key());
      if (u < 0) throw DataError("split file: unknown user '" + it.key() + "'");
      if (!it.value().is_string()) throw DataError("split file: item ids must be strings");
      const int i = ds.FindItem(it.value().get<std::string>());
      if (i < 0) throw DataError("split file: unknown item '" + it.value().get<std::string>() + "'");
      target[static_cast<std::size_t>(u)] = i;
    }
  }
  return AssembleSplit(ds, std::move(val), std::move(test), j["seed"].get<std::uint64_t>());
}

void WriteSplit(const SplitDataset& split, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << SplitToJson(split);
}

SplitDataset ReadSplit(const InteractionDataset& ds, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open split file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return SplitFromJson(ds, buf.str());
}

}  // namespace saers
