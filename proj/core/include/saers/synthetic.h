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

#ifndef SAERS_SYNTHETIC_H_
#define SAERS_SYNTHETIC_H_

#include <cstdint>
#include <random>
#include <vector>

#include "saers/feature_catalog.h"
#include "saers/interactions.h"
#include "saers/model.h"
#include "saers/region.h"
#include "saers/tensor.h"

namespace saers {

// Planted-preference corpus. Each item draws one class per attribute and a
// category; attribute features are noisy class prototypes and the global
// feature is a noisy category prototype. Each user likes one class of a few
// attributes and one category, and picks items by a softmax over utility.
struct SyntheticConfig {
  int users = 1000;
  int items = 10000;
  int m = 16;
  int m_g = 16;
  int categories = 6;
  int favourite_attributes = 2;
  int min_interactions = 10;
  int max_interactions = 20;
  double attribute_weight = 1.0;
  double category_weight = 0.6;
  double temperature = 6.0;    // softmax inverse temperature
  double feature_noise = 0.3;
  int items_with_maps = 0;     // leading items that also carry F/G maps
  int map_channels = 8;
  int map_size = 8;
  ImageFrame frame{64, 64};
  std::uint64_t seed = 0;
};

struct SyntheticCorpus {
  InteractionDataset interactions;
  FeatureCatalog catalog;
  std::vector<std::vector<int>> item_classes;  // items x A
  std::vector<int> item_category;
  std::vector<std::vector<int>> user_favourites;  // attribute indices
  std::vector<std::vector<int>> user_liked_classes;  // parallel to user_favourites
  std::vector<int> user_category;

  // Ground-truth utility of item i for user u.
  double Utility(const SyntheticConfig& config, int u, int i) const;
};

SyntheticCorpus MakeSyntheticCorpus(const SyntheticConfig& config);

// Feature/gradient maps (T x h x w) whose saliency is concentrated on
// `box`, given in map coordinates, with sub-threshold background noise.
struct PlantedMaps {
  Tensor feature_maps;
  Tensor grad_maps;
};
PlantedMaps MakePlantedMaps(int channels, int height, int width, const RegionBBox& box, std::mt19937_64& rng);

// Random triple for gradient checks: parameters ~ N(0, scale^2), features
// ~ N(0, 1). Draws are repeated until every attention pre-activation is at
// least kGradCheckKinkMargin away from zero.
inline constexpr double kGradCheckKinkMargin = 1e-2;
struct GradCheckCase {
  ModelParams params;
  ItemFeatures pos;
  ItemFeatures neg;
  int user = 0;
  double lambda = 0.0;
};
GradCheckCase MakeGradCheckCase(int d, Variant variant, std::uint64_t seed, int m = 6, int m_g = 5,
                                int num_attributes = kNumAttributes, double scale = 0.5);

// Canonical image region of attribute k (3 x 4 grid over the frame).
RegionBBox CanonicalRegion(int attribute, ImageFrame frame);

}  // namespace saers

#endif  // SAERS_SYNTHETIC_H_
