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

#include "saers/localizer.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "saers/error.h"

namespace saers {
namespace {

void CheckMaps(const Tensor& f, const Tensor& g) {
  if (f.ndim() != 3) throw DataError("feature maps must be T x H x W");
  if (f.shape() != g.shape()) throw DataError("feature and gradient map shapes differ");
  if (!f.AllFinite() || !g.AllFinite()) throw NumericError("non-finite feature or gradient maps");
}

}  // namespace

double IoU(const RegionBBox& a, const RegionBBox& b) {
  const int ix0 = std::max(a.x0, b.x0), iy0 = std::max(a.y0, b.y0);
  const int ix1 = std::min(a.x1, b.x1), iy1 = std::min(a.y1, b.y1);
  const long inter = (ix1 < ix0 || iy1 < iy0) ? 0 : static_cast<long>(ix1 - ix0 + 1) * (iy1 - iy0 + 1);
  const long uni = a.Area() + b.Area() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::uint8_t{1}));
}

SaliencyMap GradAam(const Tensor& feature_maps, const Tensor& grad_maps) {
  CheckMaps(feature_maps, grad_maps);
  const std::int64_t channels = feature_maps.dim(0);
  const int h = static_cast<int>(feature_maps.dim(1));
  const int w = static_cast<int>(feature_maps.dim(2));
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  const std::vector<double> f = feature_maps.ToDoubles();
  const std::vector<double> g = grad_maps.ToDoubles();

  SaliencyMap out{h, w, std::vector<double>(plane, 0.0), channels, h, w};
  for (std::int64_t t = 0; t < channels; ++t) {
    const double* gt = g.data() + t * plane;
    const double* ft = f.data() + t * plane;
    double alpha = 0.0;
    for (std::size_t p = 0; p < plane; ++p) alpha += gt[p];
    alpha /= static_cast<double>(plane);
    for (std::size_t p = 0; p < plane; ++p) out.values[p] += alpha * ft[p];
  }
  for (double& v : out.values) v = std::max(0.0, v);
  return out;
}

SaliencyMap UpsampleBilinear(const SaliencyMap& map, int out_height, int out_width) {
  if (out_height < 1 || out_width < 1) throw ConfigError("upsample size must be positive");
  SaliencyMap out = map;
  out.height = out_height;
  out.width = out_width;
  out.values.assign(static_cast<std::size_t>(out_height) * out_width, 0.0);
  const double sy = out_height > 1 ? static_cast<double>(map.height - 1) / (out_height - 1) : 0.0;
  const double sx = out_width > 1 ? static_cast<double>(map.width - 1) / (out_width - 1) : 0.0;
  for (int y = 0; y < out_height; ++y) {
    const double fy = y * sy;
    const int y0 = std::min(static_cast<int>(fy), map.height - 1);
    const int y1 = std::min(y0 + 1, map.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_width; ++x) {
      const double fx = x * sx;
      const int x0 = std::min(static_cast<int>(fx), map.width - 1);
      const int x1 = std::min(x0 + 1, map.width - 1);
      const double wx = fx - x0;
      // a + w * (b - a) keeps constant regions exactly constant.
      const double top = map.at(y0, x0) + wx * (map.at(y0, x1) - map.at(y0, x0));
      const double bot = map.at(y1, x0) + wx * (map.at(y1, x1) - map.at(y1, x0));
      out.values[static_cast<std::size_t>(y) * out_width + x] = std::max(0.0, top + wy * (bot - top));
    }
  }
  return out;
}

BinaryMask SegmentThreshold(const SaliencyMap& map, double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw ConfigError("threshold ratio must lie in [0, 1)");
  if (map.values.empty()) throw DataError("cannot threshold an empty map");
  BinaryMask mask{map.height, map.width, std::vector<std::uint8_t>(map.values.size(), 1)};
  const double peak = *std::max_element(map.values.begin(), map.values.end());
  if (peak <= 0.0) return mask;
  const double tau = ratio * peak;
  for (std::size_t p = 0; p < map.values.size(); ++p) mask.values[p] = map.values[p] > tau ? 1 : 0;
  return mask;
}

RegionBBox LargestConnectedRegion(const BinaryMask& mask, int connectivity) {
  if (connectivity != 4 && connectivity != 8) throw ConfigError("connectivity must be 4 or 8");
  const int h = mask.height, w = mask.width;
  std::vector<std::uint8_t> seen(mask.values.size(), 0);
  std::vector<int> stack;
  RegionBBox best;
  std::size_t best_size = 0;
  static constexpr int kDy[8] = {-1, 1, 0, 0, -1, -1, 1, 1};
  static constexpr int kDx[8] = {0, 0, -1, 1, -1, 1, -1, 1};

  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      const std::size_t start = static_cast<std::size_t>(sy) * w + sx;
      if (!mask.values[start] || seen[start]) continue;
      RegionBBox box{sx, sy, sx, sy, {h, w}};
      std::size_t size = 0;
      seen[start] = 1;
      stack.assign(1, static_cast<int>(start));
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        ++size;
        const int y = p / w, x = p % w;
        box.x0 = std::min(box.x0, x);
        box.x1 = std::max(box.x1, x);
        box.y0 = std::min(box.y0, y);
        box.y1 = std::max(box.y1, y);
        for (int n = 0; n < connectivity; ++n) {
          const int ny = y + kDy[n], nx = x + kDx[n];
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
          if (mask.values[q] && !seen[q]) {
            seen[q] = 1;
            stack.push_back(static_cast<int>(q));
          }
        }
      }
      // Strictly larger only: the raster-first component wins ties.
      if (size > best_size) {
        best_size = size;
        best = box;
      }
    }
  }
  if (best_size == 0) throw DataError("mask has no set pixels");
  return best;
}

std::vector<double> RoiPool(const Tensor& feature_maps, const RegionBBox& bbox_image) {
  if (feature_maps.ndim() != 3) throw DataError("feature maps must be T x H x W");
  if (!bbox_image.IsValid()) throw DataError("bbox outside its image frame");
  const std::int64_t channels = feature_maps.dim(0);
  const std::int64_t h = feature_maps.dim(1), w = feature_maps.dim(2);
  const std::int64_t img_h = bbox_image.frame.height, img_w = bbox_image.frame.width;

  auto lo = [](std::int64_t v, std::int64_t n, std::int64_t img) { return std::clamp(v * n / img, std::int64_t{0}, n - 1); };
  auto hi = [](std::int64_t v, std::int64_t n, std::int64_t img) {
    return std::clamp(((v + 1) * n + img - 1) / img - 1, std::int64_t{0}, n - 1);
  };
  const std::int64_t x0 = lo(bbox_image.x0, w, img_w), x1 = hi(bbox_image.x1, w, img_w);
  const std::int64_t y0 = lo(bbox_image.y0, h, img_h), y1 = hi(bbox_image.y1, h, img_h);
  assert(x0 <= x1 && y0 <= y1);

  const std::vector<double> f = feature_maps.ToDoubles();
  std::vector<double> out(static_cast<std::size_t>(channels));
  for (std::int64_t t = 0; t < channels; ++t) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t y = y0; y <= y1; ++y) {
      for (std::int64_t x = x0; x <= x1; ++x) best = std::max(best, f[static_cast<std::size_t>((t * h + y) * w + x)]);
    }
    out[static_cast<std::size_t>(t)] = best;
  }
  return out;
}

LocalizedAttribute LocalizeAttribute(const Tensor& feature_maps, const Tensor& grad_maps, ImageFrame frame) {
  if (frame.height < 1 || frame.width < 1) throw DataError("image frame must be positive");
  const SaliencyMap coarse = GradAam(feature_maps, grad_maps);
  const SaliencyMap fine = UpsampleBilinear(coarse, frame.height, frame.width);
  RegionBBox box = LargestConnectedRegion(SegmentThreshold(fine, kSegmentRatio));
  box.frame = frame;
  return {box, RoiPool(feature_maps, box)};
}

LocalizedAttribute LocalizeAttribute(const FeatureCatalog& catalog, const ItemFeatures& item, int attribute) {
  if (attribute < 0 || attribute >= catalog.num_attributes()) throw DataError("attribute index out of range");
  const auto k = static_cast<std::size_t>(attribute);
  if (k >= item.maps.size() || !item.maps[k].has_maps()) {
    throw DataError("no feature/gradient maps for attribute '" + catalog.attribute_names[k] + "'");
  }
  const std::optional<ImageFrame> frame = catalog.FrameFor(item, attribute);
  return LocalizeAttribute(*item.maps[k].feature_maps, *item.maps[k].grad_maps, *frame);
}

}  // namespace saers
