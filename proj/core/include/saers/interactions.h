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

#ifndef SAERS_INTERACTIONS_H_
#define SAERS_INTERACTIONS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace saers {

// Implicit feedback with dense indices. Users and items are indexed in
// ascending id order; `user_items[u]` is sorted and duplicate-free.
class InteractionDataset {
 public:
  InteractionDataset() = default;
  InteractionDataset(std::vector<std::string> user_ids, std::vector<std::string> item_ids,
                     std::vector<std::vector<std::int32_t>> user_items);

  int num_users() const { return static_cast<int>(user_ids_.size()); }
  int num_items() const { return static_cast<int>(item_ids_.size()); }
  std::size_t num_interactions() const { return num_interactions_; }

  const std::string& user_id(int u) const { return user_ids_.at(static_cast<std::size_t>(u)); }
  const std::string& item_id(int i) const { return item_ids_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<std::string>& item_ids() const { return item_ids_; }

  const std::vector<std::int32_t>& items_of(int u) const { return user_items_.at(static_cast<std::size_t>(u)); }
  bool Contains(int u, int i) const;

  // Distinct users that interacted with the item.
  std::int64_t popularity(int i) const { return counts_.at(static_cast<std::size_t>(i)); }

  // -1 when absent.
  int FindUser(std::string_view id) const;
  int FindItem(std::string_view id) const;

 private:
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::vector<std::vector<std::int32_t>> user_items_;
  std::vector<std::int64_t> counts_;
  std::size_t num_interactions_ = 0;
};

// Parses `user<TAB>item` rows (# comments, blank lines skipped), removes
// duplicates and drops users with fewer than `min_user_interactions`
// distinct items. Throws FormatError on malformed rows and DataError when
// nothing survives the filter.
InteractionDataset ParseInteractions(std::string_view text, int min_user_interactions = 5);
InteractionDataset LoadInteractions(const std::filesystem::path& path, int min_user_interactions = 5);

void WriteInteractions(const InteractionDataset& ds, const std::filesystem::path& path);

// Leave-one-out split over a shared user/item index space.
struct SplitDataset {
  InteractionDataset full;   // every retained interaction
  InteractionDataset train;  // full minus validation and test items
  std::vector<std::int32_t> val_item;
  std::vector<std::int32_t> test_item;
  std::vector<bool> cold;  // item has zero train occurrences
  std::uint64_t seed = 0;

  int num_users() const { return full.num_users(); }
  int num_items() const { return full.num_items(); }
  bool is_cold(int i) const { return cold.at(static_cast<std::size_t>(i)); }
  std::vector<std::int32_t> cold_items() const;

  // Interacted in train, validation or test.
  bool IsRated(int u, int i) const { return full.Contains(u, i); }
};

// Per user draws the validation item, then the test item from the rest,
// uniformly without replacement. Throws DataError for users with < 2 items.
SplitDataset SplitLeaveOneOut(const InteractionDataset& ds, std::uint64_t seed);

// Split file: {"seed": int, "val": {user: item}, "test": {user: item}}.
std::string SplitToJson(const SplitDataset& split);
SplitDataset SplitFromJson(const InteractionDataset& ds, std::string_view json_text);
void WriteSplit(const SplitDataset& split, const std::filesystem::path& path);
SplitDataset ReadSplit(const InteractionDataset& ds, const std::filesystem::path& path);

}  // namespace saers

#endif  // SAERS_INTERACTIONS_H_
