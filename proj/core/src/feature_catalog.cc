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

#include "saers/feature_catalog.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "json.hpp"
#include "saers/error.h"

namespace saers {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<double> ReadVector(const fs::path& path, int expected_len, const std::string& what) {
  const Tensor t = ReadTensor(path);
  if (t.ndim() != 1 || t.dim(0) != expected_len) {
    throw DataError(what + ": expected shape [" + std::to_string(expected_len) + "] in " + path.string());
  }
  return t.ToDoubles();
}

int RequireInt(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw DataError(std::string("manifest: '") + key + "' must be an integer");
  }
  const long long v = j[key].get<long long>();
  if (v < 1 || v > (1 << 24)) throw DataError(std::string("manifest: '") + key + "' out of range");
  return static_cast<int>(v);
}

const json& RequireObject(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_object()) {
    throw DataError(where + ": '" + key + "' must be an object");
  }
  return j[key];
}

std::string RequireString(const json& j, const std::string& where) {
  if (!j.is_string()) throw DataError(where + " must be a string");
  return j.get<std::string>();
}

RegionBBox ParseBBox(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw DataError(where + ": bbox must be [x0,y0,x1,y1]");
  int v[4];
  for (int k = 0; k < 4; ++k) {
    if (!j[k].is_number_integer()) throw DataError(where + ": bbox entries must be integers");
    v[k] = j[k].get<int>();
  }
  return RegionBBox{v[0], v[1], v[2], v[3], {}};
}

// Keeps file names portable even when item ids are not.
std::string Slug(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", index);
  return buf;
}

Tensor VectorTensor(const std::vector<double>& v) {
  return Tensor({static_cast<std::int64_t>(v.size())}, std::vector<float>(v.begin(), v.end()));
}

}  // namespace

const std::vector<std::string>& StandardAttributeNames() {
  static const std::vector<std::string> names = {
      "high neck",    "collar",          "lapel",       "neckline",
      "sleeves length", "body length",   "skirt length", "trousers length",
      "heel height",  "boots height",    "closure",     "toe style",
  };
  return names;
}

const std::map<std::string, std::vector<std::string>>& StandardAttributeClasses() {
  static const std::map<std::string, std::vector<std::string>> classes = {
      {"high neck", {"ruffle semi-high", "turtle"}},
      {"collar", {"rib collar", "puritan collar"}},
      {"lapel", {"notched", "shawl", "collarless"}},
      {"neckline", {"V", "square", "round"}},
      {"sleeves length", {"sleeveless", "cap", "short"}},
      {"body length", {"high waist", "long", "regular"}},
      {"skirt length", {"short", "knee", "midi", "ankle"}},
      {"trousers length", {"short", "mid", "3/4", "cropped"}},
      {"heel height", {"flat", "1 in-7/4 in", "under 1 in"}},
      {"boots height", {"ankle", "knee-high", "mid-calf"}},
      {"closure", {"lace-up", "slip-on", "zipper"}},
      {"toe style", {"round", "pointed", "peep", "open"}},
  };
  return classes;
}

int FeatureCatalog::AttributeIndex(std::string_view name) const {
  for (std::size_t k = 0; k < attribute_names.size(); ++k) {
    if (attribute_names[k] == name) return static_cast<int>(k);
  }
  throw DataError("unknown attribute name '" + std::string(name) + "'");
}

const ItemFeatures& FeatureCatalog::item(const std::string& id) const {
  auto it = items.find(id);
  if (it == items.end()) throw DataError("item '" + id + "' not in feature catalog");
  return it->second;
}

std::optional<ImageFrame> FeatureCatalog::FrameFor(const ItemFeatures& it, int attribute) const {
  if (image_frame) return image_frame;
  if (attribute >= 0 && static_cast<std::size_t>(attribute) < it.maps.size()) {
    const AttributeMaps& am = it.maps[static_cast<std::size_t>(attribute)];
    if (am.feature_maps) {
      return ImageFrame{static_cast<int>(am.feature_maps->dim(1)), static_cast<int>(am.feature_maps->dim(2))};
    }
  }
  return std::nullopt;
}

void FeatureCatalog::Validate(int expected_attributes) const {
  const int a = num_attributes();
  if (a < 1) throw DataError("catalog has no attributes");
  if (expected_attributes >= 0 && a != expected_attributes) {
    throw DataError("catalog must declare " + std::to_string(expected_attributes) + " attributes, found " +
                    std::to_string(a));
  }
  std::set<std::string> unique(attribute_names.begin(), attribute_names.end());
  if (unique.size() != attribute_names.size()) throw DataError("duplicate attribute names");
  for (const auto& [name, labels] : attribute_classes) {
    if (!unique.count(name)) throw DataError("attribute_classes names unknown attribute '" + name + "'");
    (void)labels;
  }
  if (m < 1 || m_g < 1) throw DataError("feature dimensions must be positive");
  if (image_frame && (image_frame->height < 1 || image_frame->width < 1)) {
    throw DataError("image_frame must be positive");
  }
  for (const auto& [id, it] : items) {
    const std::string where = "item '" + id + "'";
    if (static_cast<int>(it.attr_feats.size()) != a) {
      throw DataError(where + ": expected " + std::to_string(a) + " attribute vectors, found " +
                      std::to_string(it.attr_feats.size()));
    }
    for (const auto& f : it.attr_feats) {
      if (static_cast<int>(f.size()) != m) throw DataError(where + ": attribute feature length != m");
      for (double x : f) {
        if (!std::isfinite(x)) throw DataError(where + ": non-finite attribute feature");
      }
    }
    if (static_cast<int>(it.global_feat.size()) != m_g) throw DataError(where + ": global feature length != m_g");
    if (!it.maps.empty() && static_cast<int>(it.maps.size()) != a) {
      throw DataError(where + ": maps must have one entry per attribute");
    }
    for (std::size_t k = 0; k < it.maps.size(); ++k) {
      const AttributeMaps& am = it.maps[k];
      const std::string aw = where + " attribute '" + attribute_names[k] + "'";
      if (am.feature_maps.has_value() != am.grad_maps.has_value()) {
        throw DataError(aw + ": feature and gradient maps must be given together");
      }
      if (am.feature_maps) {
        if (am.feature_maps->ndim() != 3) throw DataError(aw + ": maps must be T x H x W");
        if (am.feature_maps->shape() != am.grad_maps->shape()) {
          throw DataError(aw + ": feature and gradient map shapes differ");
        }
      }
      if (am.class_confidence && !(*am.class_confidence >= 0.0 && *am.class_confidence <= 1.0)) {
        throw DataError(aw + ": confidence must lie in [0,1]");
      }
      if (am.predicted_class) {
        auto cls = attribute_classes.find(attribute_names[k]);
        if (cls != attribute_classes.end() && !cls->second.empty() &&
            std::find(cls->second.begin(), cls->second.end(), *am.predicted_class) == cls->second.end()) {
          throw DataError(aw + ": class '" + *am.predicted_class + "' not in attribute_classes");
        }
      }
      if (am.bbox && !am.bbox->IsValid()) throw DataError(aw + ": bbox outside its image frame");
    }
  }
}

FeatureCatalog LoadFeatureManifest(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open " + manifest_path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw DataError("manifest must be a JSON object");

  FeatureCatalog cat;
  cat.m = RequireInt(j, "m");
  cat.m_g = RequireInt(j, "m_g");
  if (!j.contains("attribute_names") || !j["attribute_names"].is_array()) {
    throw DataError("manifest: 'attribute_names' must be an array");
  }
  for (const json& n : j["attribute_names"]) cat.attribute_names.push_back(RequireString(n, "attribute name"));
  if (cat.num_attributes() != kNumAttributes) {
    throw DataError("manifest: expected " + std::to_string(kNumAttributes) + " attribute_names, found " +
                    std::to_string(cat.num_attributes()));
  }
  if (j.contains("attribute_classes")) {
    const json& ac = RequireObject(j, "attribute_classes", "manifest");
    for (auto it = ac.begin(); it != ac.end(); ++it) {
      if (!it.value().is_array()) throw DataError("manifest: class list of '" + it.key() + "' must be an array");
      std::vector<std::string> labels;
      for (const json& l : it.value()) labels.push_back(RequireString(l, "class label"));
      cat.attribute_classes[it.key()] = std::move(labels);
    }
  }
  if (j.contains("image_frame")) {
    const json& f = j["image_frame"];
    if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() || !f[1].is_number_integer()) {
      throw DataError("manifest: image_frame must be [H, W]");
    }
    cat.image_frame = ImageFrame{f[0].get<int>(), f[1].get<int>()};
  }

  const json& items = RequireObject(j, "items", "manifest");
  const int a = cat.num_attributes();
  for (auto it = items.begin(); it != items.end(); ++it) {
    const std::string where = "item '" + it.key() + "'";
    const json& ij = it.value();
    if (!ij.is_object()) throw DataError(where + " must be an object");
    ItemFeatures feats;
    const json& attrs = RequireObject(ij, "attrs", where);
    for (auto a_it = attrs.begin(); a_it != attrs.end(); ++a_it) cat.AttributeIndex(a_it.key());
    feats.attr_feats.resize(static_cast<std::size_t>(a));
    for (int k = 0; k < a; ++k) {
      const std::string& name = cat.attribute_names[static_cast<std::size_t>(k)];
      if (!attrs.contains(name)) throw DataError(where + ": missing attribute feature '" + name + "'");
      feats.attr_feats[static_cast<std::size_t>(k)] =
          ReadVector(dir / RequireString(attrs[name], where + " attr path"), cat.m, where + " '" + name + "'");
    }
    if (!ij.contains("global")) throw DataError(where + ": missing 'global'");
    feats.global_feat = ReadVector(dir / RequireString(ij["global"], where + " global path"), cat.m_g, where);

    if (ij.contains("maps")) {
      const json& maps = RequireObject(ij, "maps", where);
      feats.maps.resize(static_cast<std::size_t>(a));
      for (auto m_it = maps.begin(); m_it != maps.end(); ++m_it) {
        const int k = cat.AttributeIndex(m_it.key());
        const json& mj = m_it.value();
        const std::string mw = where + " maps '" + m_it.key() + "'";
        if (!mj.is_object()) throw DataError(mw + " must be an object");
        AttributeMaps& am = feats.maps[static_cast<std::size_t>(k)];
        if (mj.contains("F")) am.feature_maps = ReadTensor(dir / RequireString(mj["F"], mw + " F"));
        if (mj.contains("G")) am.grad_maps = ReadTensor(dir / RequireString(mj["G"], mw + " G"));
        if (mj.contains("class")) am.predicted_class = RequireString(mj["class"], mw + " class");
        if (mj.contains("confidence")) {
          if (!mj["confidence"].is_number()) throw DataError(mw + ": confidence must be a number");
          am.class_confidence = mj["confidence"].get<double>();
        }
        if (mj.contains("bbox")) {
          RegionBBox box = ParseBBox(mj["bbox"], mw);
          std::optional<ImageFrame> frame = cat.image_frame;
          if (!frame && am.feature_maps && am.feature_maps->ndim() == 3) {
            frame = ImageFrame{static_cast<int>(am.feature_maps->dim(1)), static_cast<int>(am.feature_maps->dim(2))};
          }
          if (!frame) throw DataError(mw + ": bbox needs image_frame or maps to define its frame");
          box.frame = *frame;
          am.bbox = box;
        }
      }
    }
    cat.items.emplace(it.key(), std::move(feats));
  }
  cat.Validate(kNumAttributes);
  return cat;
}

void WriteFeatureManifest(const FeatureCatalog& catalog, const fs::path& dir) {
  catalog.Validate(-1);
  fs::create_directories(dir / "items");
  nlohmann::ordered_json j;
  j["m"] = catalog.m;
  j["m_g"] = catalog.m_g;
  j["attribute_names"] = catalog.attribute_names;
  j["attribute_classes"] = nlohmann::ordered_json::object();
  for (const auto& [name, labels] : catalog.attribute_classes) j["attribute_classes"][name] = labels;
  if (catalog.image_frame) j["image_frame"] = {catalog.image_frame->height, catalog.image_frame->width};
  j["items"] = nlohmann::ordered_json::object();

  std::size_t index = 0;
  for (const auto& [id, it] : catalog.items) {
    const std::string base = "items/" + Slug(index++);
    fs::create_directories(dir / base);
    nlohmann::ordered_json ij;
    ij["attrs"] = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < it.attr_feats.size(); ++k) {
      const std::string rel = base + "/attr_" + Slug(k).substr(4) + ".sat";
      WriteTensor(dir / rel, VectorTensor(it.attr_feats[k]));
      ij["attrs"][catalog.attribute_names[k]] = rel;
    }
    const std::string grel = base + "/global.sat";
    WriteTensor(dir / grel, VectorTensor(it.global_feat));
    ij["global"] = grel;
    nlohmann::ordered_json maps = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < it.maps.size(); ++k) {
      const AttributeMaps& am = it.maps[k];
      nlohmann::ordered_json mj = nlohmann::ordered_json::object();
      if (am.feature_maps) {
        const std::string frel = base + "/F_" + Slug(k).substr(4) + ".sat";
        const std::string gr = base + "/G_" + Slug(k).substr(4) + ".sat";
        WriteTensor(dir / frel, *am.feature_maps);
        WriteTensor(dir / gr, *am.grad_maps);
        mj["F"] = frel;
        mj["G"] = gr;
      }
      if (am.predicted_class) mj["class"] = *am.predicted_class;
      if (am.class_confidence) mj["confidence"] = *am.class_confidence;
      if (am.bbox) mj["bbox"] = {am.bbox->x0, am.bbox->y0, am.bbox->x1, am.bbox->y1};
      if (!mj.empty()) maps[catalog.attribute_names[k]] = std::move(mj);
    }
    if (!maps.empty()) ij["maps"] = std::move(maps);
    j["items"][id] = std::move(ij);
  }
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
  out << j.dump(2) << '\n';
}

}  // namespace saers
