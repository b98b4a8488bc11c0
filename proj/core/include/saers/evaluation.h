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

#ifndef SAERS_EVALUATION_H_
#define SAERS_EVALUATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saers/interactions.h"
#include "saers/model.h"

namespace saers {

// (user, item) -> score over the dense indices of a SplitDataset.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  virtual double Score(int user, int item) const = 0;
  virtual void ScoreItems(int user, std::span<const std::int32_t> items, std::span<double> out) const;
};

// Fixed score table, scores[user][item].
class TableScorer : public Scorer {
 public:
  explicit TableScorer(std::vector<std::vector<double>> scores) : scores_(std::move(scores)) {}
  std::string name() const override { return "table"; }
  double Score(int user, int item) const override {
    return scores_.at(static_cast<std::size_t>(user)).at(static_cast<std::size_t>(item));
  }

 private:
  std::vector<std::vector<double>> scores_;
};

// Scores with a trained SAERS-family model. Item-side projections are
// computed once at construction; `items[i]` holds the features of item i.
class SaersScorer : public Scorer {
 public:
  SaersScorer(ModelParams params, std::vector<const ItemFeatures*> items);
  std::string name() const override { return VariantName(params_.config.variant); }
  double Score(int user, int item) const override;
  void ScoreItems(int user, std::span<const std::int32_t> items, std::span<double> out) const override;

  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  std::vector<ItemProjection> projections_;
};

enum class Scenario { kAll, kCold };
enum class HeldOut { kValidation, kTest };

const char* ScenarioName(Scenario s);
Scenario ParseScenario(std::string_view name);

struct AucResult {
  double value = 0.0;
  int users = 0;  // users that contributed
};

// Mean over users of the fraction of unrated items scored below the held-out
// item (ties count 1/2). For kCold, only users whose held-out item is cold
// contribute, and only cold items serve as negatives. Throws DataError when
// no user qualifies.
AucResult Auc(const Scorer& scorer, const SplitDataset& split, Scenario scenario,
              HeldOut held_out = HeldOut::kTest, int threads = 1);

// Discount of one relevant item at 1-based `rank`; 0 beyond `cutoff`.
double NdcgAtRank(int rank, int cutoff);

struct NdcgOptions {
  std::vector<int> cutoffs = {10};
  int rounds = 10000;
  int negatives = 500;
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::kAll;
  int threads = 1;
};

// Sampled NDCG@N: per round pick a user, sample `negatives` unrated items,
// rank them with the test item (score descending, then item index
// ascending). Returns cutoff -> mean over rounds. Throws DataError when a
// user has too few unrated items.
std::map<int, double> NdcgAtN(const Scorer& scorer, const SplitDataset& split, const NdcgOptions& options);

struct EvalReport {
  std::string scorer;
  std::optional<double> auc_all;
  std::optional<double> auc_cold;
  std::map<int, double> ndcg;
  std::optional<Scenario> ndcg_scenario;
  int n_users = 0;
  int n_cold_items = 0;
};

// Stable key order, full double precision.
std::string EvalReportToJson(const EvalReport& report);

}  // namespace saers

#endif  // SAERS_EVALUATION_H_
