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

#include "saers/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "saers/error.h"

namespace saers {
namespace {

std::vector<double> Gaussian(int n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist(rng);
  return v;
}

std::string Id(char prefix, int index, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%0*d", prefix, width, index);
  return buf;
}

int Digits(int n) { return static_cast<int>(std::to_string(std::max(n - 1, 0)).size()); }

}  // namespace

double SyntheticCorpus::Utility(const SyntheticConfig& config, int u, int i) const {
  const auto& favs = user_favourites.at(static_cast<std::size_t>(u));
  const auto& liked = user_liked_classes.at(static_cast<std::size_t>(u));
  const auto& classes = item_classes.at(static_cast<std::size_t>(i));
  double utility = 0.0;
  for (std::size_t f = 0; f < favs.size(); ++f) {
    if (classes[static_cast<std::size_t>(favs[f])] == liked[f]) utility += config.attribute_weight;
  }
  if (item_category.at(static_cast<std::size_t>(i)) == user_category.at(static_cast<std::size_t>(u))) {
    utility += config.category_weight;
  }
  return utility;
}

GradCheckCase MakeGradCheckCase(int d, Variant variant, std::uint64_t seed, int m, int m_g, int num_attributes,
                                double scale) {
  ModelConfig mc;
  mc.d = d;
  mc.m = m;
  mc.m_g = m_g;
  mc.num_attributes = num_attributes;
  mc.variant = variant;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> param(0.0, scale);
  for (;;) {
    GradCheckCase c;
    c.params = ModelParams::Zeros(mc, 3);
    for (ParamBlock& b : c.params.Blocks()) {
      for (double& v : b.values) v = param(rng);
    }
    for (ItemFeatures* it : {&c.pos, &c.neg}) {
      for (int k = 0; k < num_attributes; ++k) it->attr_feats.push_back(Gaussian(m, 1.0, rng));
      it->global_feat = Gaussian(m_g, 1.0, rng);
    }
    c.user = std::uniform_int_distribution<int>(0, 2)(rng);
    c.lambda = 0.01;
    // Redraw when a ReLU input sits near its kink, where the loss is not
    // smooth at finite-difference scale.
    const TripleForward f = ScoreTriple(c.params, c.user, c.pos, c.neg);
    bool smooth = true;
    for (const ForwardCache* fc : {&f.pos_cache, &f.neg_cache}) {
      for (double z : fc->hidden_pre.data) smooth = smooth && std::abs(z) >= kGradCheckKinkMargin;
    }
    if (smooth) return c;
  }
}

RegionBBox CanonicalRegion(int attribute, ImageFrame frame) {
  const int row = attribute / 3, col = attribute % 3;
  const int y0 = row * frame.height / 4, y1 = (row + 1) * frame.height / 4 - 1;
  const int x0 = col * frame.width / 3, x1 = (col + 1) * frame.width / 3 - 1;
  return {x0, y0, x1, y1, frame};
}

PlantedMaps MakePlantedMaps(int channels, int height, int width, const RegionBBox& box, std::mt19937_64& rng) {
  if (channels < 2 || height < 1 || width < 1) throw ConfigError("planted maps need >= 2 channels and a non-empty grid");
  std::uniform_real_distribution<float> noise(0.0f, 0.05f);
  const std::size_t plane = static_cast<std::size_t>(height) * width;
  std::vector<float> f(static_cast<std::size_t>(channels) * plane), g(f.size(), 0.0f);
  for (int t = 0; t < channels; ++t) {
    const bool signal = t < channels / 2;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const std::size_t idx = static_cast<std::size_t>(t) * plane + static_cast<std::size_t>(y) * width + x;
        const bool inside = x >= box.x0 && x <= box.x1 && y >= box.y0 && y <= box.y1;
        f[idx] = noise(rng) + (signal && inside ? 1.0f : 0.0f);
        g[idx] = signal ? 1.0f : -0.5f * noise(rng);
      }
    }
  }
  const std::vector<std::int64_t> shape = {channels, height, width};
  return {Tensor(shape, std::move(f)), Tensor(shape, std::move(g))};
}

SyntheticCorpus MakeSyntheticCorpus(const SyntheticConfig& c) {
  if (c.users < 1 || c.items < 1 || c.m < 1 || c.m_g < 1 || c.categories < 1) {
    throw ConfigError("synthetic: sizes must be positive");
  }
  if (c.min_interactions < 3 || c.max_interactions < c.min_interactions || c.max_interactions > c.items) {
    throw ConfigError("synthetic: need 3 <= min_interactions <= max_interactions <= items");
  }
  if (c.favourite_attributes < 1 || c.favourite_attributes > kNumAttributes) {
    throw ConfigError("synthetic: favourite_attributes out of range");
  }
  std::mt19937_64 rng(c.seed);
  const auto& names = StandardAttributeNames();
  const auto& class_names = StandardAttributeClasses();
  const int a = kNumAttributes;

  SyntheticCorpus out;
  FeatureCatalog& cat = out.catalog;
  cat.m = c.m;
  cat.m_g = c.m_g;
  cat.attribute_names = names;
  cat.attribute_classes = class_names;
  cat.image_frame = c.frame;

  std::vector<std::vector<std::vector<double>>> prototypes(static_cast<std::size_t>(a));
  std::vector<int> num_classes(static_cast<std::size_t>(a));
  for (int k = 0; k < a; ++k) {
    num_classes[static_cast<std::size_t>(k)] = static_cast<int>(class_names.at(names[static_cast<std::size_t>(k)]).size());
    for (int cl = 0; cl < num_classes[static_cast<std::size_t>(k)]; ++cl) {
      prototypes[static_cast<std::size_t>(k)].push_back(Gaussian(c.m, 1.0, rng));
    }
  }
  std::vector<std::vector<double>> category_protos;
  for (int g = 0; g < c.categories; ++g) category_protos.push_back(Gaussian(c.m_g, 1.0, rng));

  const int item_digits = Digits(c.items);
  std::vector<std::string> item_ids;
  std::uniform_real_distribution<double> conf(0.6, 1.0);
  std::normal_distribution<double> noise(0.0, c.feature_noise);
  std::mt19937_64 map_rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < c.items; ++i) {
    ItemFeatures it;
    std::vector<int> classes(static_cast<std::size_t>(a));
    it.maps.resize(static_cast<std::size_t>(a));
    for (int k = 0; k < a; ++k) {
      const int cl = std::uniform_int_distribution<int>(0, num_classes[static_cast<std::size_t>(k)] - 1)(rng);
      classes[static_cast<std::size_t>(k)] = cl;
      std::vector<double> f = prototypes[static_cast<std::size_t>(k)][static_cast<std::size_t>(cl)];
      for (double& x : f) x += noise(rng);
      it.attr_feats.push_back(std::move(f));
      AttributeMaps& am = it.maps[static_cast<std::size_t>(k)];
      am.predicted_class = class_names.at(names[static_cast<std::size_t>(k)])[static_cast<std::size_t>(cl)];
      am.class_confidence = conf(rng);
      am.bbox = CanonicalRegion(k, c.frame);
      if (i < c.items_with_maps) {
        const ImageFrame grid{c.map_size, c.map_size};
        RegionBBox box = CanonicalRegion(k, grid);
        PlantedMaps pm = MakePlantedMaps(c.map_channels, c.map_size, c.map_size, box, map_rng);
        am.feature_maps = std::move(pm.feature_maps);
        am.grad_maps = std::move(pm.grad_maps);
        am.bbox.reset();
      }
    }
    const int category = std::uniform_int_distribution<int>(0, c.categories - 1)(rng);
    it.global_feat = category_protos[static_cast<std::size_t>(category)];
    for (double& x : it.global_feat) x += noise(rng);
    out.item_classes.push_back(std::move(classes));
    out.item_category.push_back(category);
    item_ids.push_back(Id('i', i, item_digits));
    cat.items.emplace(item_ids.back(), std::move(it));
  }

  const int user_digits = Digits(c.users);
  std::vector<std::string> user_ids;
  std::vector<std::vector<std::int32_t>> user_items;
  std::vector<int> attrs(static_cast<std::size_t>(a));
  std::iota(attrs.begin(), attrs.end(), 0);
  std::extreme_value_distribution<double> gumbel(0.0, 1.0);
  std::vector<std::pair<double, std::int32_t>> keyed(static_cast<std::size_t>(c.items));
  for (int u = 0; u < c.users; ++u) {
    std::shuffle(attrs.begin(), attrs.end(), rng);
    std::vector<int> favs(attrs.begin(), attrs.begin() + c.favourite_attributes);
    std::vector<int> liked;
    for (int k : favs) liked.push_back(std::uniform_int_distribution<int>(0, num_classes[static_cast<std::size_t>(k)] - 1)(rng));
    const int liked_category = std::uniform_int_distribution<int>(0, c.categories - 1)(rng);
    const int n = std::uniform_int_distribution<int>(c.min_interactions, c.max_interactions)(rng);
    // Gumbel top-n draws n items without replacement from softmax(T * utility).
    for (int i = 0; i < c.items; ++i) {
      double utility = 0.0;
      for (std::size_t f = 0; f < favs.size(); ++f) {
        if (out.item_classes[static_cast<std::size_t>(i)][static_cast<std::size_t>(favs[f])] == liked[f]) utility += c.attribute_weight;
      }
      if (out.item_category[static_cast<std::size_t>(i)] == liked_category) utility += c.category_weight;
      keyed[static_cast<std::size_t>(i)] = {c.temperature * utility + gumbel(rng), i};
    }
    std::partial_sort(keyed.begin(), keyed.begin() + n, keyed.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    std::vector<std::int32_t> chosen;
    for (int r = 0; r < n; ++r) chosen.push_back(keyed[static_cast<std::size_t>(r)].second);
    user_ids.push_back(Id('u', u, user_digits));
    user_items.push_back(std::move(chosen));
    out.user_favourites.push_back(std::move(favs));
    out.user_liked_classes.push_back(std::move(liked));
    out.user_category.push_back(liked_category);
  }
  out.interactions = InteractionDataset(std::move(user_ids), std::move(item_ids), std::move(user_items));
  return out;
}

}  // namespace saers
