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

#ifndef SAERS_REGION_H_
#define SAERS_REGION_H_

namespace saers {

struct ImageFrame {
  int height = 0;
  int width = 0;

  friend bool operator==(const ImageFrame&, const ImageFrame&) = default;
};

// Axis-aligned rectangle with inclusive pixel coordinates inside `frame`.
struct RegionBBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  ImageFrame frame;

  bool IsValid() const {
    return 0 <= x0 && x0 <= x1 && x1 < frame.width && 0 <= y0 && y0 <= y1 && y1 < frame.height;
  }
  int Width() const { return x1 - x0 + 1; }
  int Height() const { return y1 - y0 + 1; }
  long Area() const { return static_cast<long>(Width()) * Height(); }

  static RegionBBox FullFrame(ImageFrame f) { return {0, 0, f.width - 1, f.height - 1, f}; }

  friend bool operator==(const RegionBBox&, const RegionBBox&) = default;
};

// Intersection over union of two boxes in the same frame.
double IoU(const RegionBBox& a, const RegionBBox& b);

}  // namespace saers

#endif  // SAERS_REGION_H_
