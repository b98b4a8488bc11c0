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

#ifndef SAERS_BASELINES_H_
#define SAERS_BASELINES_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "saers/evaluation.h"
#include "saers/feature_catalog.h"
#include "saers/interactions.h"
#include "saers/linalg.h"
#include "saers/params.h"
#include "saers/training.h"

namespace saers {

// Deterministic pseudo-random scores from (seed, user, item).
class RandomScorer : public Scorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random"; }
  double Score(int user, int item) const override;

 private:
  std::uint64_t seed_;
};

// Training-set popularity.
class PopRankScorer : public Scorer {
 public:
  explicit PopRankScorer(const SplitDataset& split);
  std::string name() const override { return "poprank"; }
  double Score(int, int item) const override { return counts_.at(static_cast<std::size_t>(item)); }

 private:
  std::vector<double> counts_;
};

struct BprMfParams {
  Matrix user_factors;  // users x k
  Matrix item_factors;  // items x k
  Vec item_bias;

  static BprMfParams Zeros(int users, int items, int k);
  std::vector<ParamBlock> Blocks();
  std::vector<ConstParamBlock> Blocks() const;
};

// Scores beta_i + gamma_u . gamma_i. Items never seen in training start at
// zero.
class BprMf {
 public:
  using Params = BprMfParams;

  BprMf(const SplitDataset& split, int k, std::uint64_t seed);

  const Params& params() const { return params_; }
  Params& mutable_params() { return params_; }
  Params ZeroGradient() const;
  double Score(int user, int item) const;
  double AccumulateTriple(const Triple& t, double lambda, double scale, Params* grad) const;
  std::unique_ptr<Scorer> MakeScorer() const;

 private:
  Params params_;
};

struct VbprParams {
  Matrix user_factors;   // users x k
  Matrix user_visual;    // users x k_v
  Matrix item_factors;   // items x k
  Vec item_bias;
  Matrix embedding;      // k_v x m_g

  static VbprParams Zeros(int users, int items, int k, int k_v, int m_g);
  std::vector<ParamBlock> Blocks();
  std::vector<ConstParamBlock> Blocks() const;
};

// beta_i + gamma_u . gamma_i + theta_u . (E g_i) on the global image
// feature. Latent and visual widths split d as floor(d/2), ceil(d/2).
class Vbpr {
 public:
  using Params = VbprParams;

  Vbpr(const SplitDataset& split, std::vector<const ItemFeatures*> items, int d, std::uint64_t seed);

  const Params& params() const { return params_; }
  Params& mutable_params() { return params_; }
  Params ZeroGradient() const;
  double Score(int user, int item) const;
  double AccumulateTriple(const Triple& t, double lambda, double scale, Params* grad) const;
  std::unique_ptr<Scorer> MakeScorer() const;
  const std::vector<const ItemFeatures*>& items() const { return items_; }

 private:
  Params params_;
  std::vector<const ItemFeatures*> items_;
};

enum class BaselineKind { kRandom, kPopRank, kBprMf, kVbpr };

const char* BaselineName(BaselineKind kind);
BaselineKind ParseBaseline(std::string_view name);

// Builds (and for learned baselines trains) a scorer. `catalog` is needed
// for VBPR only.
std::unique_ptr<Scorer> MakeBaseline(BaselineKind kind, const SplitDataset& split, const FeatureCatalog* catalog,
                                     const TrainConfig& config, TrainStats* stats = nullptr);

}  // namespace saers

#endif  // SAERS_BASELINES_H_
