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

#include "saers/explanation.h"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "saers/error.h"
#include "saers/localizer.h"

namespace saers {

using nlohmann::ordered_json;

Explanation Explain(const ModelParams& params, int user, std::string user_id, std::string item_id,
                    const FeatureCatalog& catalog) {
  if (params.config.variant == Variant::kSaersMinusSaf) {
    throw ConfigError("explanations need attribute features; variant saers-saf is unsupported");
  }
  if (user < 0 || user >= params.num_users()) throw DataError("explain: user index out of range");
  const ItemFeatures& item = catalog.item(item_id);
  if (catalog.num_attributes() != params.config.num_attributes) {
    throw DataError("explain: catalog attribute count does not match the model");
  }
  const UserProjection up = ProjectUser(params, params.user_embeddings.row(user));
  const ForwardCache fc = Combine(params, up, ProjectItem(params, item));

  Explanation e;
  e.user_id = std::move(user_id);
  e.item_id = std::move(item_id);
  e.score = fc.score;
  const int a = params.config.num_attributes;
  for (int k = 0; k < a; ++k) {
    AttributeExplanation ae;
    ae.name = catalog.attribute_names[static_cast<std::size_t>(k)];
    ae.weight = fc.weights[static_cast<std::size_t>(k)];
    const AttributeMaps* maps = item.maps.empty() ? nullptr : &item.maps[static_cast<std::size_t>(k)];
    if (maps != nullptr) {
      ae.predicted_class = maps->predicted_class;
      ae.class_confidence = maps->class_confidence;
    }
    if (maps != nullptr && maps->has_maps()) {
      ae.bbox = LocalizeAttribute(catalog, item, k).bbox;
    } else if (maps != nullptr && maps->bbox) {
      ae.bbox = *maps->bbox;
    } else {
      throw DataError("explain: no box or maps for attribute '" + ae.name + "' of item '" + e.item_id + "'");
    }
    e.attributes.push_back(std::move(ae));
  }
  e.image_frame = e.attributes.front().bbox.frame;
  std::stable_sort(e.attributes.begin(), e.attributes.end(), [](const auto& x, const auto& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    return x.name < y.name;
  });
  e.top_attribute = e.attributes.front().name;
  return e;
}

std::string ExplanationToJson(const Explanation& e) {
  ordered_json j;
  j["user"] = e.user_id;
  j["item"] = e.item_id;
  j["score"] = e.score;
  j["image_frame"] = {e.image_frame.height, e.image_frame.width};
  j["top_attribute"] = e.top_attribute;
  j["attributes"] = ordered_json::array();
  for (const auto& a : e.attributes) {
    ordered_json aj;
    aj["name"] = a.name;
    aj["weight"] = a.weight;
    aj["class"] = a.predicted_class ? ordered_json(*a.predicted_class) : ordered_json(nullptr);
    aj["confidence"] = a.class_confidence ? ordered_json(*a.class_confidence) : ordered_json(nullptr);
    aj["bbox"] = {a.bbox.x0, a.bbox.y0, a.bbox.x1, a.bbox.y1};
    j["attributes"].push_back(std::move(aj));
  }
  return j.dump(2);
}

Explanation ExplanationFromJson(std::string_view json_text) {
  Explanation e;
  try {
    const auto j = ordered_json::parse(json_text);
    e.user_id = j.at("user").get<std::string>();
    e.item_id = j.at("item").get<std::string>();
    e.score = j.at("score").get<double>();
    e.image_frame = {j.at("image_frame").at(0).get<int>(), j.at("image_frame").at(1).get<int>()};
    e.top_attribute = j.at("top_attribute").get<std::string>();
    for (const auto& aj : j.at("attributes")) {
      AttributeExplanation a;
      a.name = aj.at("name").get<std::string>();
      a.weight = aj.at("weight").get<double>();
      if (!aj.at("class").is_null()) a.predicted_class = aj.at("class").get<std::string>();
      if (!aj.at("confidence").is_null()) a.class_confidence = aj.at("confidence").get<double>();
      const auto& b = aj.at("bbox");
      if (!b.is_array() || b.size() != 4) throw FormatError("explanation: bbox must have 4 entries");
      a.bbox = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>(), e.image_frame};
      if (!a.bbox.IsValid()) throw FormatError("explanation: bbox outside the image frame");
      e.attributes.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("explanation: ") + ex.what());
  }
  return e;
}

void WriteExplanation(const Explanation& e, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << ExplanationToJson(e) << '\n';
  if (!out) throw Error("cannot write " + path.string());
}

std::vector<std::pair<std::int32_t, double>> TopK(const Scorer& scorer, const SplitDataset& split, int user, int k) {
  if (user < 0 || user >= split.num_users()) throw DataError("top-k: user index out of range");
  std::vector<std::int32_t> candidates;
  for (std::int32_t i = 0; i < split.num_items(); ++i) {
    if (!split.train.Contains(user, i)) candidates.push_back(i);
  }
  std::vector<double> scores(candidates.size());
  scorer.ScoreItems(user, candidates, scores);
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t n = std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(k, 0)));
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return candidates[a] < candidates[b];
                    });
  std::vector<std::pair<std::int32_t, double>> out;
  for (std::size_t r = 0; r < n; ++r) out.emplace_back(candidates[order[r]], scores[order[r]]);
  return out;
}

}  // namespace saers
