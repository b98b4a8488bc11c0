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

#ifndef SAERS_LOCALIZER_H_
#define SAERS_LOCALIZER_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "saers/feature_catalog.h"
#include "saers/region.h"
#include "saers/tensor.h"

namespace saers {

// Non-negative H x W grid, row-major.
struct SaliencyMap {
  int height = 0;
  int width = 0;
  std::vector<double> values;
  // (T, H, W) of the maps it was computed from.
  std::int64_t source_channels = 0;
  std::int64_t source_height = 0;
  std::int64_t source_width = 0;

  double at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;  // 0 or 1

  bool at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
};

// ReLU(sum_t alpha_t F[t]) with alpha_t the spatial mean of G[t].
SaliencyMap GradAam(const Tensor& feature_maps, const Tensor& grad_maps);

// Align-corners bilinear resize.
SaliencyMap UpsampleBilinear(const SaliencyMap& map, int out_height, int out_width);

inline constexpr double kSegmentRatio = 0.2;

// mask[p] = map[p] > ratio * max(map); an all-zero map yields an all-ones
// mask. Throws ConfigError unless ratio is in [0, 1).
BinaryMask SegmentThreshold(const SaliencyMap& map, double ratio = kSegmentRatio);

// Tight box around the connected component with the most pixels
// (connectivity 4 or 8). Ties go to the component whose first pixel in
// raster order comes first. The box frame is the mask size.
RegionBBox LargestConnectedRegion(const BinaryMask& mask, int connectivity = 4);

// Maps an image-frame box onto the T x H x W grid and max-pools each channel
// over it, producing a length-T feature.
std::vector<double> RoiPool(const Tensor& feature_maps, const RegionBBox& bbox_image);

struct LocalizedAttribute {
  RegionBBox bbox;              // image frame
  std::vector<double> feature;  // length T
};

// GradAam -> upsample to `frame` -> threshold -> largest region -> RoiPool.
LocalizedAttribute LocalizeAttribute(const Tensor& feature_maps, const Tensor& grad_maps, ImageFrame frame);

// Same pipeline using the maps stored on an item. Throws DataError when
// the attribute carries no maps.
LocalizedAttribute LocalizeAttribute(const FeatureCatalog& catalog, const ItemFeatures& item, int attribute);

}  // namespace saers

#endif  // SAERS_LOCALIZER_H_
