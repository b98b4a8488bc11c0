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

#ifndef SAERS_FEATURE_CATALOG_H_
#define SAERS_FEATURE_CATALOG_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saers/region.h"
#include "saers/tensor.h"

namespace saers {

inline constexpr int kNumAttributes = 12;

// The 12 clothing attributes (top, bottom and shoe regions).
const std::vector<std::string>& StandardAttributeNames();
const std::map<std::string, std::vector<std::string>>& StandardAttributeClasses();

// Per-attribute side data produced by the attribute classifier. Every field
// is optional; feature and gradient maps come as a pair.
struct AttributeMaps {
  std::optional<Tensor> feature_maps;  // T x H x W
  std::optional<Tensor> grad_maps;     // T x H x W
  std::optional<std::string> predicted_class;
  std::optional<double> class_confidence;
  std::optional<RegionBBox> bbox;  // image frame

  bool has_maps() const { return feature_maps.has_value() && grad_maps.has_value(); }
};

struct ItemFeatures {
  std::vector<std::vector<double>> attr_feats;  // A vectors of length m
  std::vector<double> global_feat;              // length m_g
  std::vector<AttributeMaps> maps;              // A entries, possibly empty
};

struct FeatureCatalog {
  int m = 0;
  int m_g = 0;
  std::vector<std::string> attribute_names;
  std::map<std::string, std::vector<std::string>> attribute_classes;
  std::optional<ImageFrame> image_frame;
  std::map<std::string, ItemFeatures> items;

  int num_attributes() const { return static_cast<int>(attribute_names.size()); }

  // Index of `name` in attribute_names; throws DataError when unknown.
  int AttributeIndex(std::string_view name) const;

  // Throws DataError when the id is absent.
  const ItemFeatures& item(const std::string& id) const;

  // Frame used for bounding boxes of `attribute` on `item`: the catalog's
  // image_frame if declared, otherwise the spatial size of the maps.
  std::optional<ImageFrame> FrameFor(const ItemFeatures& item, int attribute) const;

  // Checks every structural invariant. `expected_attributes` < 0 accepts any
  // positive attribute count.
  void Validate(int expected_attributes = kNumAttributes) const;
};

// Reads `dir`/manifest.json and every referenced `.sat` file. Paths in the
// manifest are relative to `dir`.
FeatureCatalog LoadFeatureManifest(const std::filesystem::path& dir);

// Writes `catalog` as manifest.json plus one `.sat` per vector/map under
// `dir`. Feature vectors are stored as f32.
void WriteFeatureManifest(const FeatureCatalog& catalog, const std::filesystem::path& dir);

}  // namespace saers

#endif  // SAERS_FEATURE_CATALOG_H_
