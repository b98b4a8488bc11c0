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
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "saers/error.h"

namespace saers {
namespace {

Tensor Maps(int t, int h, int w, std::vector<double> v) {
  return Tensor({t, h, w}, std::move(v));
}

SaliencyMap Map(int h, int w, std::vector<double> v) {
  SaliencyMap m;
  m.height = h;
  m.width = w;
  m.values = std::move(v);
  return m;
}

BinaryMask Mask(int h, int w, std::vector<std::uint8_t> v) { return BinaryMask{h, w, std::move(v)}; }

TEST(GradAamTest, HandExamples) {
  const Tensor f = Maps(1, 2, 2, {1, 2, 3, 4});
  EXPECT_EQ(GradAam(f, Maps(1, 2, 2, {1, 1, 1, 1})).values, (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(GradAam(f, Maps(1, 2, 2, {-1, -1, -1, -1})).values, (std::vector<double>{0, 0, 0, 0}));
  const Tensor f2 = Maps(2, 2, 2, {1, 0, 0, 0, 0, 0, 0, 2});
  const Tensor g2 = Maps(2, 2, 2, {2, 2, 2, 2, -1, -1, -1, -1});
  const SaliencyMap m = GradAam(f2, g2);
  EXPECT_EQ(m.values, (std::vector<double>{2, 0, 0, 0}));
  EXPECT_EQ(m.source_channels, 2);
  EXPECT_EQ(m.source_height, 2);
}

TEST(GradAamTest, Errors) {
  EXPECT_THROW(GradAam(Maps(1, 2, 2, {1, 2, 3, 4}), Maps(1, 1, 4, {1, 2, 3, 4})), DataError);
  EXPECT_THROW(GradAam(Tensor({4}, std::vector<double>{1, 2, 3, 4}), Tensor({4}, std::vector<double>{1, 2, 3, 4})),
               DataError);
  EXPECT_THROW(GradAam(Maps(1, 1, 2, {1, std::nan("")}), Maps(1, 1, 2, {1, 1})), NumericError);
}

TEST(UpsampleTest, HandExamples) {
  const SaliencyMap m = Map(2, 2, {1, 2, 3, 4});
  EXPECT_EQ(UpsampleBilinear(m, 2, 2).values, m.values);
  const SaliencyMap c = UpsampleBilinear(Map(2, 3, std::vector<double>(6, 0.7)), 9, 5);
  for (double v : c.values) EXPECT_EQ(v, 0.7);
  const SaliencyMap r = UpsampleBilinear(Map(2, 2, {0, 4, 0, 4}), 2, 3);
  EXPECT_EQ(r.values, (std::vector<double>{0, 2, 4, 0, 2, 4}));
  EXPECT_THROW(UpsampleBilinear(m, 0, 3), ConfigError);
}

TEST(SegmentThresholdTest, HandExamples) {
  EXPECT_EQ(SegmentThreshold(Map(2, 2, {10, 1, 3, 0})).values, (std::vector<std::uint8_t>{1, 0, 1, 0}));
  EXPECT_EQ(SegmentThreshold(Map(2, 2, {0, 0, 0, 0})).values, (std::vector<std::uint8_t>{1, 1, 1, 1}));
  EXPECT_EQ(SegmentThreshold(Map(1, 3, {5, 5, 5})).values, (std::vector<std::uint8_t>{1, 1, 1}));
  // Strictly above: a value equal to the threshold is excluded.
  EXPECT_EQ(SegmentThreshold(Map(1, 2, {10, 2})).values, (std::vector<std::uint8_t>{1, 0}));
  EXPECT_THROW(SegmentThreshold(Map(1, 1, {1}), 1.0), ConfigError);
  EXPECT_THROW(SegmentThreshold(Map(1, 1, {1}), -0.1), ConfigError);
}

TEST(LargestRegionTest, HandExamples) {
  // L-shape at (x,y) = (0,0),(0,1),(1,1) plus an isolated pixel at (3,3).
  std::vector<std::uint8_t> l(16, 0);
  l[0] = l[4] = l[5] = l[15] = 1;
  EXPECT_EQ(LargestConnectedRegion(Mask(4, 4, l)), (RegionBBox{0, 0, 1, 1, {4, 4}}));
  EXPECT_EQ(LargestConnectedRegion(Mask(3, 5, std::vector<std::uint8_t>(15, 1))), (RegionBBox{0, 0, 4, 2, {3, 5}}));
  std::vector<std::uint8_t> two(9, 0);
  two[0] = two[8] = 1;
  EXPECT_EQ(LargestConnectedRegion(Mask(3, 3, two)), (RegionBBox{0, 0, 0, 0, {3, 3}}));
  EXPECT_THROW(LargestConnectedRegion(Mask(2, 2, {0, 0, 0, 0})), DataError);
  // Diagonal neighbours join only under 8-connectivity.
  const BinaryMask diag = Mask(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 0});
  EXPECT_EQ(LargestConnectedRegion(diag, 8), (RegionBBox{0, 0, 1, 1, {3, 3}}));
  EXPECT_EQ(LargestConnectedRegion(diag, 4), (RegionBBox{0, 0, 0, 0, {3, 3}}));
}

TEST(RoiPoolTest, HandExamples) {
  const Tensor f = Maps(1, 2, 2, {1, 2, 3, 4});
  EXPECT_EQ(RoiPool(f, RegionBBox{1, 0, 1, 1, {2, 2}}), (std::vector<double>{4}));
  const Tensor f2 = Maps(2, 2, 2, {1, 7, 3, 4, -1, -5, -2, -3});
  EXPECT_EQ(RoiPool(f2, RegionBBox::FullFrame({2, 2})), (std::vector<double>{7, -1}));
  EXPECT_EQ(RoiPool(Maps(2, 3, 3, std::vector<double>(18, 0.0)), RegionBBox{0, 1, 2, 2, {3, 3}}),
            (std::vector<double>{0, 0}));
  // Image frame 8x8 over a 2x2 map: pixel x in [4,7] maps to column 1.
  EXPECT_EQ(RoiPool(f, RegionBBox{4, 0, 7, 3, {8, 8}}), (std::vector<double>{2}));
  EXPECT_EQ(RoiPool(f, RegionBBox{3, 0, 4, 3, {8, 8}}), (std::vector<double>{2}));
  EXPECT_THROW(RoiPool(f, RegionBBox{0, 0, 2, 0, {2, 2}}), DataError);
}

TEST(LocalizeTest, PlantedBlockIsRecoveredExactly) {
  const int t = 3, h = 8, w = 8;
  std::vector<double> f(static_cast<std::size_t>(t * h * w), 0.0);
  std::vector<double> g(f.size(), 0.0);
  for (int y = 2; y < 6; ++y) {
    for (int x = 3; x < 7; ++x) f[static_cast<std::size_t>((1 * h + y) * w + x)] = 1.0;
  }
  for (std::size_t p = 0; p < 64; ++p) g[64 + p] = 0.5;
  const LocalizedAttribute loc = LocalizeAttribute(Maps(t, h, w, f), Maps(t, h, w, g), {8, 8});
  EXPECT_EQ(loc.bbox, (RegionBBox{3, 2, 6, 5, {8, 8}}));
  EXPECT_EQ(IoU(loc.bbox, RegionBBox{3, 2, 6, 5, {8, 8}}), 1.0);
  EXPECT_EQ(loc.feature, (std::vector<double>{0, 1, 0}));
}

TEST(LocalizeTest, NegativeGradientsFallBackToFullFrame) {
  const Tensor f = Maps(2, 2, 2, {1, 2, 3, 4, 5, 6, 7, 0});
  const Tensor g = Maps(2, 2, 2, {-1, -1, -1, -1, -2, -2, -2, -2});
  const LocalizedAttribute loc = LocalizeAttribute(f, g, {6, 4});
  EXPECT_EQ(loc.bbox, RegionBBox::FullFrame({6, 4}));
  EXPECT_EQ(loc.feature, (std::vector<double>{4, 7}));
}

// ---- Randomized properties ----

// Independent component oracle: union-find over 4-neighbours, then the
// largest component with the raster-first root pixel.
RegionBBox OracleRegion(const BinaryMask& m) {
  const int n = m.height * m.width;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  auto join = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (!m.at(y, x)) continue;
      if (x + 1 < m.width && m.at(y, x + 1)) join(y * m.width + x, y * m.width + x + 1);
      if (y + 1 < m.height && m.at(y + 1, x)) join(y * m.width + x, (y + 1) * m.width + x);
    }
  }
  std::vector<int> size(static_cast<std::size_t>(n), 0);
  for (int p = 0; p < n; ++p) {
    if (m.values[static_cast<std::size_t>(p)]) ++size[static_cast<std::size_t>(find(p))];
  }
  int best = -1;
  for (int p = 0; p < n; ++p) {
    // Roots are the smallest index of their component, so scanning in raster
    // order and requiring strictly larger gives the tie rule.
    if (size[static_cast<std::size_t>(p)] > (best < 0 ? 0 : size[static_cast<std::size_t>(best)])) best = p;
  }
  RegionBBox box{m.width, m.height, -1, -1, {m.height, m.width}};
  for (int p = 0; p < n; ++p) {
    if (!m.values[static_cast<std::size_t>(p)] || find(p) != best) continue;
    box.x0 = std::min(box.x0, p % m.width);
    box.x1 = std::max(box.x1, p % m.width);
    box.y0 = std::min(box.y0, p / m.width);
    box.y1 = std::max(box.y1, p / m.width);
  }
  return box;
}

class LocalizerPropertyTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{20260101};

  Tensor RandomMaps(int t, int h, int w, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(t * h * w));
    for (double& x : v) x = d(rng_);
    return Maps(t, h, w, std::move(v));
  }
  int Dim(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
};

TEST_F(LocalizerPropertyTest, ScaleAndThresholdInvariance) {
  std::uniform_real_distribution<double> cd(0.05, 20.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = Dim(1, 4), h = Dim(1, 7), w = Dim(1, 7);
    const Tensor f = RandomMaps(t, h, w, -1.0, 2.0);
    const Tensor g = RandomMaps(t, h, w, -1.0, 1.0);
    const double c = cd(rng_);
    std::vector<double> gc = g.ToDoubles();
    for (double& x : gc) x *= c;
    const SaliencyMap a = GradAam(f, g);
    const SaliencyMap b = GradAam(f, Maps(t, h, w, gc));
    for (std::size_t p = 0; p < a.values.size(); ++p) {
      EXPECT_GE(a.values[p], 0.0);
      EXPECT_NEAR(b.values[p], c * a.values[p], 1e-12 * (1.0 + c * a.values[p]));
    }
    EXPECT_EQ(SegmentThreshold(a).values, SegmentThreshold(b).values) << "trial " << trial;

    SaliencyMap scaled = a;
    for (double& v : scaled.values) v *= c;
    EXPECT_EQ(SegmentThreshold(scaled).values, SegmentThreshold(a).values) << "trial " << trial;

    const SaliencyMap up = UpsampleBilinear(a, Dim(1, 12), Dim(1, 12));
    for (double v : up.values) EXPECT_GE(v, 0.0);
  }
}

TEST_F(LocalizerPropertyTest, RegionMatchesOracleAndIsTight) {
  std::bernoulli_distribution bit(0.45);
  for (int trial = 0; trial < 1000; ++trial) {
    const int h = Dim(1, 9), w = Dim(1, 9);
    BinaryMask m{h, w, std::vector<std::uint8_t>(static_cast<std::size_t>(h * w))};
    for (auto& v : m.values) v = bit(rng_) ? 1 : 0;
    if (m.count() == 0) m.values[static_cast<std::size_t>(Dim(0, h * w - 1))] = 1;
    const RegionBBox box = LargestConnectedRegion(m);
    ASSERT_EQ(box, OracleRegion(m)) << "trial " << trial;
    ASSERT_TRUE(box.IsValid());
    // Each edge of the box touches a set pixel.
    bool top = false, bottom = false, left = false, right = false;
    for (int x = box.x0; x <= box.x1; ++x) top |= m.at(box.y0, x), bottom |= m.at(box.y1, x);
    for (int y = box.y0; y <= box.y1; ++y) left |= m.at(y, box.x0), right |= m.at(y, box.x1);
    EXPECT_TRUE(top && bottom && left && right);
  }
}

TEST_F(LocalizerPropertyTest, TieBreakPrefersRasterFirstComponent) {
  for (int trial = 0; trial < 1000; ++trial) {
    // Two equal horizontal bars on separate rows, with a gap between them.
    const int w = Dim(3, 10), len = Dim(1, w), h = Dim(3, 9);
    const int ya = Dim(0, h - 3), yb = Dim(ya + 2, h - 1);
    const int xa = Dim(0, w - len), xb = Dim(0, w - len);
    BinaryMask m{h, w, std::vector<std::uint8_t>(static_cast<std::size_t>(h * w), 0)};
    for (int k = 0; k < len; ++k) {
      m.values[static_cast<std::size_t>(ya * w + xa + k)] = 1;
      m.values[static_cast<std::size_t>(yb * w + xb + k)] = 1;
    }
    EXPECT_EQ(LargestConnectedRegion(m), (RegionBBox{xa, ya, xa + len - 1, ya, {h, w}}));
  }
}

TEST_F(LocalizerPropertyTest, RoiPoolIsMonotoneInTheBox) {
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = Dim(1, 3), h = Dim(1, 6), w = Dim(1, 6);
    const ImageFrame frame{Dim(1, 32), Dim(1, 32)};
    const Tensor f = RandomMaps(t, h, w, -3.0, 3.0);
    RegionBBox inner{Dim(0, frame.width - 1), Dim(0, frame.height - 1), 0, 0, frame};
    inner.x1 = Dim(inner.x0, frame.width - 1);
    inner.y1 = Dim(inner.y0, frame.height - 1);
    const RegionBBox outer{Dim(0, inner.x0), Dim(0, inner.y0), Dim(inner.x1, frame.width - 1),
                           Dim(inner.y1, frame.height - 1), frame};
    const std::vector<double> a = RoiPool(f, inner);
    const std::vector<double> b = RoiPool(f, outer);
    const std::vector<double> all = RoiPool(f, RegionBBox::FullFrame(frame));
    ASSERT_EQ(a.size(), static_cast<std::size_t>(t));
    for (int c = 0; c < t; ++c) {
      EXPECT_LE(a[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(c)]);
      EXPECT_LE(b[static_cast<std::size_t>(c)], all[static_cast<std::size_t>(c)]);
      const auto channel = f.ToDoubles();
      EXPECT_EQ(all[static_cast<std::size_t>(c)],
                *std::max_element(channel.begin() + c * h * w, channel.begin() + (c + 1) * h * w));
    }
  }
}

TEST_F(LocalizerPropertyTest, ChannelPermutationLeavesBoxUnchanged) {
  for (int trial = 0; trial < 200; ++trial) {
    const int t = Dim(2, 5), h = Dim(2, 6), w = Dim(2, 6);
    const Tensor f = RandomMaps(t, h, w, 0.0, 1.0);
    const Tensor g = RandomMaps(t, h, w, -0.5, 1.0);
    std::vector<int> perm(static_cast<std::size_t>(t));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng_);
    const std::vector<double> fv = f.ToDoubles(), gv = g.ToDoubles();
    std::vector<double> fp(fv.size()), gp(gv.size());
    const std::size_t plane = static_cast<std::size_t>(h * w);
    for (int c = 0; c < t; ++c) {
      std::copy_n(fv.begin() + perm[static_cast<std::size_t>(c)] * plane, plane, fp.begin() + c * plane);
      std::copy_n(gv.begin() + perm[static_cast<std::size_t>(c)] * plane, plane, gp.begin() + c * plane);
    }
    const ImageFrame frame{Dim(h, 24), Dim(w, 24)};
    const LocalizedAttribute a = LocalizeAttribute(f, g, frame);
    const LocalizedAttribute b = LocalizeAttribute(Maps(t, h, w, fp), Maps(t, h, w, gp), frame);
    // Summation order differs, so pixels within round-off of the threshold
    // could in principle flip; on continuous random data they do not.
    EXPECT_EQ(a.bbox, b.bbox) << "trial " << trial;
  }
}

}  // namespace
}  // namespace saers
