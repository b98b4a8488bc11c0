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

#include "saers/evaluation.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "json.hpp"
#include "saers/error.h"
#include "saers/parallel.h"

namespace saers {
namespace {

std::int32_t HeldOutItem(const SplitDataset& split, int u, HeldOut held_out) {
  return held_out == HeldOut::kTest ? split.test_item[static_cast<std::size_t>(u)]
                                    : split.val_item[static_cast<std::size_t>(u)];
}

// Per-user candidate negatives: unrated items, restricted to cold ones for
// the cold scenario.
std::vector<std::int32_t> Negatives(const SplitDataset& split, int u, Scenario scenario) {
  std::vector<std::int32_t> out;
  const auto& rated = split.full.items_of(u);
  auto r = rated.begin();
  for (std::int32_t i = 0; i < split.num_items(); ++i) {
    while (r != rated.end() && *r < i) ++r;
    if (r != rated.end() && *r == i) continue;
    if (scenario == Scenario::kCold && !split.is_cold(i)) continue;
    out.push_back(i);
  }
  return out;
}

std::vector<int> EligibleUsers(const SplitDataset& split, Scenario scenario, HeldOut held_out) {
  std::vector<int> users;
  for (int u = 0; u < split.num_users(); ++u) {
    if (scenario == Scenario::kCold && !split.is_cold(HeldOutItem(split, u, held_out))) continue;
    users.push_back(u);
  }
  return users;
}

}  // namespace

void Scorer::ScoreItems(int user, std::span<const std::int32_t> items, std::span<double> out) const {
  for (std::size_t k = 0; k < items.size(); ++k) out[k] = Score(user, items[k]);
}

SaersScorer::SaersScorer(ModelParams params, std::vector<const ItemFeatures*> items) : params_(std::move(params)) {
  projections_.reserve(items.size());
  for (const ItemFeatures* it : items) {
    if (it == nullptr) throw DataError("scorer: item without features");
    projections_.push_back(ProjectItem(params_, *it));
  }
}

double SaersScorer::Score(int user, int item) const {
  const UserProjection up = ProjectUser(params_, params_.user_embeddings.row(user));
  return Combine(params_, up, projections_.at(static_cast<std::size_t>(item))).score;
}

void SaersScorer::ScoreItems(int user, std::span<const std::int32_t> items, std::span<double> out) const {
  const UserProjection up = ProjectUser(params_, params_.user_embeddings.row(user));
  ForwardCache fc;
  for (std::size_t k = 0; k < items.size(); ++k) {
    Combine(params_, up, projections_.at(static_cast<std::size_t>(items[k])), &fc);
    out[k] = fc.score;
  }
}

const char* ScenarioName(Scenario s) { return s == Scenario::kAll ? "all" : "cold"; }

Scenario ParseScenario(std::string_view name) {
  if (name == "all") return Scenario::kAll;
  if (name == "cold") return Scenario::kCold;
  throw ConfigError("unknown scenario '" + std::string(name) + "' (expected all|cold)");
}

AucResult Auc(const Scorer& scorer, const SplitDataset& split, Scenario scenario, HeldOut held_out, int threads) {
  const std::vector<int> users = EligibleUsers(split, scenario, held_out);
  std::vector<double> per_user(users.size(), 0.0);
  std::vector<char> counted(users.size(), 0);
  ParallelFor(users.size(), threads, [&](std::size_t k) {
    const int u = users[k];
    const std::int32_t pos = HeldOutItem(split, u, held_out);
    std::vector<std::int32_t> items = Negatives(split, u, scenario);
    if (items.empty()) return;
    items.push_back(pos);
    std::vector<double> scores(items.size());
    scorer.ScoreItems(u, items, scores);
    const double s_pos = scores.back();
    double wins = 0.0;
    for (std::size_t j = 0; j + 1 < scores.size(); ++j) {
      if (s_pos > scores[j]) {
        wins += 1.0;
      } else if (s_pos == scores[j]) {
        wins += 0.5;
      }
    }
    per_user[k] = wins / static_cast<double>(scores.size() - 1);
    counted[k] = 1;
  });
  AucResult r;
  double total = 0.0;
  for (std::size_t k = 0; k < users.size(); ++k) {
    if (!counted[k]) continue;
    total += per_user[k];
    ++r.users;
  }
  if (r.users == 0) throw DataError(std::string("no evaluable users for the ") + ScenarioName(scenario) + " scenario");
  r.value = total / r.users;
  return r;
}

double NdcgAtRank(int rank, int cutoff) {
  if (rank < 1 || rank > cutoff) return 0.0;
  return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

std::map<int, double> NdcgAtN(const Scorer& scorer, const SplitDataset& split, const NdcgOptions& options) {
  if (options.rounds < 1) throw ConfigError("NDCG needs at least one round");
  if (options.negatives < 1) throw ConfigError("NDCG needs at least one negative");
  for (int n : options.cutoffs) {
    if (n < 1) throw ConfigError("NDCG cutoff must be >= 1");
  }
  const std::vector<int> users = EligibleUsers(split, options.scenario, HeldOut::kTest);
  if (users.empty()) throw DataError(std::string("no evaluable users for the ") + ScenarioName(options.scenario) + " scenario");

  std::vector<int> ranks(static_cast<std::size_t>(options.rounds), 0);
  ParallelFor(ranks.size(), options.threads, [&](std::size_t round) {
    std::mt19937_64 rng(DeriveSeed(options.seed, round));
    const int u = users[std::uniform_int_distribution<std::size_t>(0, users.size() - 1)(rng)];
    std::vector<std::int32_t> pool = Negatives(split, u, options.scenario);
    const auto need = static_cast<std::size_t>(options.negatives);
    if (pool.size() < need) {
      throw DataError("user '" + split.full.user_id(u) + "' has " + std::to_string(pool.size()) +
                      " unrated candidate items, NDCG needs " + std::to_string(need));
    }
    for (std::size_t k = 0; k < need; ++k) {
      const std::size_t pick = std::uniform_int_distribution<std::size_t>(k, pool.size() - 1)(rng);
      std::swap(pool[k], pool[pick]);
    }
    pool.resize(need);
    const std::int32_t pos = split.test_item[static_cast<std::size_t>(u)];
    pool.push_back(pos);
    std::vector<double> scores(pool.size());
    scorer.ScoreItems(u, pool, scores);
    const double s_pos = scores.back();
    int rank = 1;
    for (std::size_t k = 0; k < need; ++k) {
      if (scores[k] > s_pos || (scores[k] == s_pos && pool[k] < pos)) ++rank;
    }
    ranks[round] = rank;
  });

  std::map<int, double> out;
  for (int n : options.cutoffs) {
    double total = 0.0;
    for (int rank : ranks) total += NdcgAtRank(rank, n);
    out[n] = total / static_cast<double>(ranks.size());
  }
  return out;
}

std::string EvalReportToJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["scorer"] = report.scorer;
  j["auc_all"] = report.auc_all ? nlohmann::ordered_json(*report.auc_all) : nlohmann::ordered_json(nullptr);
  j["auc_cold"] = report.auc_cold ? nlohmann::ordered_json(*report.auc_cold) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json ndcg = nlohmann::ordered_json::object();
  for (const auto& [n, v] : report.ndcg) ndcg[std::to_string(n)] = v;
  j["ndcg"] = std::move(ndcg);
  j["ndcg_scenario"] = report.ndcg_scenario ? nlohmann::ordered_json(ScenarioName(*report.ndcg_scenario))
                                            : nlohmann::ordered_json(nullptr);
  j["n_users"] = report.n_users;
  j["n_cold_items"] = report.n_cold_items;
  return j.dump(2) + "\n";
}

}  // namespace saers
