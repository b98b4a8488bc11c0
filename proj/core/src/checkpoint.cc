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

#include "saers/checkpoint.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "saers/error.h"
#include "saers/tensor.h"

namespace saers {
namespace {

using nlohmann::ordered_json;

ordered_json ModelConfigJson(const ModelConfig& c) {
  ordered_json j;
  j["d"] = c.d;
  j["num_attributes"] = c.num_attributes;
  j["m"] = c.m;
  j["m_g"] = c.m_g;
  j["hidden"] = c.hidden_width();
  j["variant"] = VariantName(c.variant);
  return j;
}

ordered_json Nullable(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json StatsJson(const TrainStats& s) {
  ordered_json j;
  j["epochs_run"] = s.epochs_run;
  j["best_epoch"] = s.best_epoch;
  j["best_val_auc"] = Nullable(s.best_val_auc);
  j["epoch_loss"] = ordered_json::array();
  for (double l : s.epoch_loss) j["epoch_loss"].push_back(Nullable(l));
  j["val_auc"] = ordered_json::array();
  for (const auto& [epoch, auc] : s.val_auc) j["val_auc"].push_back(ordered_json::array({epoch, Nullable(auc)}));
  return j;
}

double NumberOrNan(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

TrainStats StatsFromJson(const ordered_json& j) {
  TrainStats s;
  s.epochs_run = j.at("epochs_run").get<int>();
  s.best_epoch = j.at("best_epoch").get<int>();
  s.best_val_auc = NumberOrNan(j.at("best_val_auc"));
  for (const auto& l : j.at("epoch_loss")) s.epoch_loss.push_back(NumberOrNan(l));
  for (const auto& p : j.at("val_auc")) s.val_auc.emplace_back(p.at(0).get<int>(), NumberOrNan(p.at(1)));
  return s;
}

}  // namespace

std::string ModelConfigToJson(const ModelConfig& config) { return ModelConfigJson(config).dump(2); }

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& dir) {
  const ModelParams& p = ckpt.params;
  if (static_cast<int>(ckpt.user_ids.size()) != p.num_users()) {
    throw DataError("checkpoint: user id list does not match user_embeddings rows");
  }
  std::filesystem::create_directories(dir);
  ordered_json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["config"] = ModelConfigJson(p.config);
  j["train"] = ordered_json::parse(TrainConfigToJson(ckpt.config));
  j["seed"] = ckpt.config.seed;
  j["epoch"] = ckpt.stats.best_epoch;
  j["users"] = ckpt.user_ids;
  j["tensors"] = ordered_json::object();
  for (const ConstParamBlock& b : p.Blocks()) {
    const std::string file = b.name + ".sat";
    WriteTensor(dir / file, Tensor(b.shape, std::vector<double>(b.values.begin(), b.values.end())));
    j["tensors"][b.name] = file;
  }
  j["stats"] = StatsJson(ckpt.stats);
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.json";
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw DataError("cannot open " + manifest.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ordered_json j;
  try {
    j = ordered_json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(manifest.string() + ": " + e.what());
  }

  Checkpoint ckpt;
  try {
    if (j.value("format", std::string()) != kCheckpointFormat) throw FormatError(manifest.string() + ": not a checkpoint");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw FormatError(manifest.string() + ": unsupported checkpoint version " + std::to_string(version));
    }
    const auto& c = j.at("config");
    ModelConfig mc;
    mc.d = c.at("d").get<int>();
    mc.num_attributes = c.at("num_attributes").get<int>();
    mc.m = c.at("m").get<int>();
    mc.m_g = c.at("m_g").get<int>();
    mc.hidden = c.at("hidden").get<int>();
    mc.variant = ParseVariant(c.at("variant").get<std::string>());
    ckpt.config = ParseTrainConfig(j.at("train").dump());
    ckpt.user_ids = j.at("users").get<std::vector<std::string>>();
    ckpt.stats = StatsFromJson(j.at("stats"));
    if (ckpt.user_ids.empty()) throw DataError(manifest.string() + ": no users");
    if (mc.d != ckpt.config.d || mc.variant != ckpt.config.variant) {
      throw ConfigError(manifest.string() + ": model config disagrees with training config");
    }
    ckpt.params = ModelParams::Zeros(mc, static_cast<int>(ckpt.user_ids.size()));
    const auto& tensors = j.at("tensors");
    for (ParamBlock& b : ckpt.params.Blocks()) {
      if (!tensors.contains(b.name)) throw DataError(manifest.string() + ": missing tensor '" + b.name + "'");
      const auto path = dir / tensors.at(b.name).get<std::string>();
      if (!std::filesystem::exists(path)) {
        throw DataError("checkpoint tensor '" + b.name + "' missing: " + path.string());
      }
      const Tensor t = ReadTensor(path);
      if (t.shape() != b.shape) {
        throw ConfigError("checkpoint tensor '" + b.name + "' has a shape that does not match the config");
      }
      if (t.dtype() != DType::kFloat64) throw FormatError("checkpoint tensor '" + b.name + "' is not f64");
      std::copy(t.f64().begin(), t.f64().end(), b.values.begin());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest.string() + ": " + e.what());
  }
  return ckpt;
}

}  // namespace saers
