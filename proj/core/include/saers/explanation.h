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

#ifndef SAERS_EXPLANATION_H_
#define SAERS_EXPLANATION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "saers/evaluation.h"
#include "saers/feature_catalog.h"
#include "saers/interactions.h"
#include "saers/model.h"
#include "saers/region.h"

namespace saers {

struct AttributeExplanation {
  std::string name;
  double weight = 0.0;
  std::optional<std::string> predicted_class;
  std::optional<double> class_confidence;
  RegionBBox bbox;

  friend bool operator==(const AttributeExplanation&, const AttributeExplanation&) = default;
};

struct Explanation {
  std::string user_id;
  std::string item_id;
  double score = 0.0;
  ImageFrame image_frame;
  std::vector<AttributeExplanation> attributes;  // weight descending, then name
  std::string top_attribute;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

// Attention weights for (user, item) from one forward pass, with each
// attribute's class metadata and box. The box is localized from the maps
// when present, otherwise taken from the catalog. Throws ConfigError for
// the global-only variant and DataError when an attribute has no box.
Explanation Explain(const ModelParams& params, int user, std::string user_id, std::string item_id,
                    const FeatureCatalog& catalog);

std::string ExplanationToJson(const Explanation& e);
Explanation ExplanationFromJson(std::string_view json_text);
void WriteExplanation(const Explanation& e, const std::filesystem::path& path);

// Highest-scoring items the user has not interacted with in training,
// ties broken by item index.
std::vector<std::pair<std::int32_t, double>> TopK(const Scorer& scorer, const SplitDataset& split, int user, int k);

}  // namespace saers

#endif  // SAERS_EXPLANATION_H_
