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

#include "saers/training.h"

#include <set>

#include "json.hpp"
#include "saers/error.h"

namespace saers {
namespace {

bool Samplable(const SplitDataset& split, int u) {
  const std::size_t n = split.train.items_of(u).size();
  return n > 0 && n < static_cast<std::size_t>(split.num_items());
}

template <typename T>
T Get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace

Triple SampleTriple(const SplitDataset& split, std::mt19937_64& rng) {
  const int nu = split.num_users();
  const int ni = split.num_items();
  if (nu == 0 || ni == 0) throw DataError("cannot sample triples from an empty split");
  std::uniform_int_distribution<int> user_dist(0, nu - 1);
  int u = -1;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const int c = user_dist(rng);
    if (Samplable(split, c)) {
      u = c;
      break;
    }
  }
  if (u < 0) {
    std::vector<int> eligible;
    for (int c = 0; c < nu; ++c) {
      if (Samplable(split, c)) eligible.push_back(c);
    }
    if (eligible.empty()) throw DataError("no user has both training items and unobserved items");
    u = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
  }
  const auto& items = split.train.items_of(u);
  const int pos = items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
  std::uniform_int_distribution<int> item_dist(0, ni - 1);
  int neg = item_dist(rng);
  while (split.train.Contains(u, neg)) neg = item_dist(rng);
  return {u, pos, neg};
}

void TrainConfig::Validate() const {
  hyper.Validate();
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (early_stop_patience < 1) throw ConfigError("early_stop_patience must be >= 1");
  if (d < 1) throw ConfigError("d must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

TrainConfig ParseTrainConfig(std::string_view json_text, const TrainConfig& base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> kKeys = {"lambda", "lr", "beta1", "beta2", "epsilon", "batch_size",
                                              "epochs", "eval_every", "seed", "variant", "early_stop_patience",
                                              "d"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
  }
  TrainConfig c = base;
  if (j.contains("lambda")) c.hyper.lambda = Get<double>(j, "lambda");
  if (j.contains("lr")) c.hyper.lr = Get<double>(j, "lr");
  if (j.contains("beta1")) c.hyper.beta1 = Get<double>(j, "beta1");
  if (j.contains("beta2")) c.hyper.beta2 = Get<double>(j, "beta2");
  if (j.contains("epsilon")) c.hyper.epsilon = Get<double>(j, "epsilon");
  if (j.contains("batch_size")) c.hyper.batch_size = Get<int>(j, "batch_size");
  if (j.contains("epochs")) c.epochs = Get<int>(j, "epochs");
  if (j.contains("eval_every")) c.eval_every = Get<int>(j, "eval_every");
  if (j.contains("seed")) c.seed = Get<std::uint64_t>(j, "seed");
  if (j.contains("variant")) c.variant = ParseVariant(Get<std::string>(j, "variant"));
  if (j.contains("early_stop_patience")) c.early_stop_patience = Get<int>(j, "early_stop_patience");
  if (j.contains("d")) c.d = Get<int>(j, "d");
  c.Validate();
  return c;
}

std::string TrainConfigToJson(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["lambda"] = c.hyper.lambda;
  j["lr"] = c.hyper.lr;
  j["beta1"] = c.hyper.beta1;
  j["beta2"] = c.hyper.beta2;
  j["epsilon"] = c.hyper.epsilon;
  j["batch_size"] = c.hyper.batch_size;
  j["epochs"] = c.epochs;
  j["eval_every"] = c.eval_every;
  j["seed"] = c.seed;
  j["variant"] = VariantName(c.variant);
  j["early_stop_patience"] = c.early_stop_patience;
  j["d"] = c.d;
  return j.dump(2);
}

std::vector<const ItemFeatures*> AlignItems(const SplitDataset& split, const FeatureCatalog& catalog) {
  std::vector<const ItemFeatures*> out;
  out.reserve(static_cast<std::size_t>(split.num_items()));
  for (const std::string& id : split.full.item_ids()) {
    auto it = catalog.items.find(id);
    if (it == catalog.items.end()) throw DataError("no features for item '" + id + "'");
    out.push_back(&it->second);
  }
  return out;
}

SaersRanker::SaersRanker(ModelParams params, std::vector<const ItemFeatures*> items)
    : params_(std::move(params)), items_(std::move(items)) {
  for (const ItemFeatures* it : items_) {
    if (it == nullptr) throw DataError("ranker: item without features");
    CheckItemShape(params_.config, *it);
  }
}

double SaersRanker::AccumulateTriple(const Triple& t, double lambda, double scale, ModelParams* grad) const {
  const TripleForward fwd = ScoreTriple(params_, t.user, *items_[static_cast<std::size_t>(t.pos)],
                                        *items_[static_cast<std::size_t>(t.neg)]);
  return Backward(fwd, params_, lambda, scale, grad);
}

std::unique_ptr<Scorer> SaersRanker::MakeScorer() const { return std::make_unique<SaersScorer>(params_, items_); }

ModelConfig MakeModelConfig(const TrainConfig& config, const FeatureCatalog& catalog) {
  ModelConfig mc;
  mc.d = config.d;
  mc.num_attributes = static_cast<int>(catalog.attribute_names.size());
  mc.m = catalog.m;
  mc.m_g = catalog.m_g;
  mc.variant = config.variant;
  mc.Validate();
  return mc;
}

TrainResult Train(const TrainConfig& config, const SplitDataset& split, const FeatureCatalog& catalog) {
  config.Validate();
  const ModelConfig mc = MakeModelConfig(config, catalog);
  SaersRanker ranker(InitParams(mc, split.num_users(), config.seed), AlignItems(split, catalog));
  TrainStats stats = TrainPairwise(ranker, split, config);
  return {std::move(ranker.mutable_params()), std::move(stats)};
}

}  // namespace saers
