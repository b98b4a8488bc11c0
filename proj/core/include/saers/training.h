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

#ifndef SAERS_TRAINING_H_
#define SAERS_TRAINING_H_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "saers/error.h"
#include "saers/evaluation.h"
#include "saers/feature_catalog.h"
#include "saers/interactions.h"
#include "saers/model.h"
#include "saers/optimizer.h"
#include "saers/parallel.h"

namespace saers {

struct Triple {
  int user = 0;
  int pos = 0;
  int neg = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// u uniform over users with training items, i uniform over train(u), j
// uniform over items not in train(u) (rejection sampling). Throws DataError
// when no user can be sampled.
Triple SampleTriple(const SplitDataset& split, std::mt19937_64& rng);

struct TrainConfig {
  TrainHyper hyper;
  int epochs = 50;
  int eval_every = 5;
  std::uint64_t seed = 0;
  Variant variant = Variant::kSaers;
  int early_stop_patience = 5;
  int d = 10;
  int threads = 1;  // not serialized; results do not depend on it

  void Validate() const;
};

// Flat JSON object with keys lambda, lr, beta1, beta2, epsilon, batch_size,
// epochs, eval_every, seed, variant, early_stop_patience, d. Missing keys
// keep `base` values; unknown keys throw ConfigError.
TrainConfig ParseTrainConfig(std::string_view json_text, const TrainConfig& base = {});
std::string TrainConfigToJson(const TrainConfig& config);

struct TrainStats {
  std::vector<double> epoch_loss;                  // mean triple loss per epoch
  std::vector<std::pair<int, double>> val_auc;     // (epoch, validation AUC)
  int best_epoch = 0;
  double best_val_auc = std::numeric_limits<double>::quiet_NaN();
  int epochs_run = 0;
  double wall_seconds = 0.0;  // never serialized
};

// Number of fixed gradient accumulators per batch. Triples are assigned to
// them by position, so the reduction order does not depend on threads.
inline constexpr int kGradientChunks = 16;

template <typename Params>
void AddInto(Params& dst, const Params& src) {
  auto d = dst.Blocks();
  const auto s = src.Blocks();
  for (std::size_t b = 0; b < d.size(); ++b) {
    for (std::size_t i = 0; i < d[b].values.size(); ++i) d[b].values[i] += s[b].values[i];
  }
}

template <typename Params>
void ScaleInPlace(Params& p, double factor) {
  for (auto& b : p.Blocks()) {
    for (double& v : b.values) v *= factor;
  }
}

// Interface shared by SAERS and the learned baselines.
template <typename M>
concept PairwiseModel = requires(M& m, const M& cm, const Triple& t, typename M::Params* g) {
  { cm.params() } -> std::convertible_to<const typename M::Params&>;
  { m.mutable_params() } -> std::same_as<typename M::Params&>;
  { cm.ZeroGradient() } -> std::same_as<typename M::Params>;
  { cm.AccumulateTriple(t, 0.0, 1.0, g) } -> std::same_as<double>;
  { cm.MakeScorer() } -> std::same_as<std::unique_ptr<Scorer>>;
};

// BPR training with Adam: epochs of ceil(|train| / batch) mini-batches of
// sampled triples, gradients averaged per batch, validation AUC probes every
// `eval_every` epochs (and after the last), early stop after
// `early_stop_patience` probes without improvement. Leaves the best-probe
// parameters in `model`.
template <PairwiseModel M>
TrainStats TrainPairwise(M& model, const SplitDataset& split, const TrainConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = split.train.num_interactions();
  if (n == 0) throw DataError("training set is empty");
  const auto batch = static_cast<std::size_t>(config.hyper.batch_size);
  const std::size_t num_batches = (n + batch - 1) / batch;

  TrainStats stats;
  AdamState adam;
  typename M::Params best = model.params();
  int stale_probes = 0;
  std::vector<Triple> triples;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < num_batches; ++b) {
      const std::size_t size = std::min(batch, n - b * batch);
      std::mt19937_64 rng(DeriveSeed(config.seed, (static_cast<std::uint64_t>(epoch) << 32) | b));
      triples.resize(size);
      for (Triple& t : triples) t = SampleTriple(split, rng);

      const std::size_t chunks = std::min<std::size_t>(size, kGradientChunks);
      std::vector<typename M::Params> grads;
      grads.reserve(chunks);
      for (std::size_t c = 0; c < chunks; ++c) grads.push_back(model.ZeroGradient());
      std::vector<double> losses(chunks, 0.0);
      ParallelFor(chunks, config.threads, [&](std::size_t c) {
        const std::size_t lo = c * size / chunks, hi = (c + 1) * size / chunks;
        for (std::size_t k = lo; k < hi; ++k) losses[c] += model.AccumulateTriple(triples[k], config.hyper.lambda, 1.0, &grads[c]);
      });
      for (std::size_t c = 1; c < chunks; ++c) AddInto(grads[0], grads[c]);
      ScaleInPlace(grads[0], 1.0 / static_cast<double>(size));
      AdamStep(model.mutable_params(), grads[0], config.hyper, &adam);
      for (double l : losses) epoch_loss += l;
    }
    if (!std::isfinite(epoch_loss)) throw NumericError("training loss diverged at epoch " + std::to_string(epoch));
    stats.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
    stats.epochs_run = epoch;

    if (epoch % config.eval_every == 0 || epoch == config.epochs) {
      const double auc = Auc(*model.MakeScorer(), split, Scenario::kAll, HeldOut::kValidation, config.threads).value;
      stats.val_auc.emplace_back(epoch, auc);
      if (stats.best_epoch == 0 || auc > stats.best_val_auc) {
        stats.best_val_auc = auc;
        stats.best_epoch = epoch;
        best = model.params();
        stale_probes = 0;
      } else if (++stale_probes >= config.early_stop_patience) {
        break;
      }
    }
  }
  model.mutable_params() = std::move(best);
  stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

// Catalog features aligned with the split's item indices. Throws DataError
// naming the first item the catalog lacks.
std::vector<const ItemFeatures*> AlignItems(const SplitDataset& split, const FeatureCatalog& catalog);

// SAERS-family model bound to per-item features.
class SaersRanker {
 public:
  using Params = ModelParams;

  SaersRanker(ModelParams params, std::vector<const ItemFeatures*> items);

  const ModelParams& params() const { return params_; }
  ModelParams& mutable_params() { return params_; }
  ModelParams ZeroGradient() const { return ModelParams::Zeros(params_.config, params_.num_users()); }
  double AccumulateTriple(const Triple& t, double lambda, double scale, ModelParams* grad) const;
  std::unique_ptr<Scorer> MakeScorer() const;

 private:
  ModelParams params_;
  std::vector<const ItemFeatures*> items_;
};

struct TrainResult {
  ModelParams params;
  TrainStats stats;
};

ModelConfig MakeModelConfig(const TrainConfig& config, const FeatureCatalog& catalog);

// Initializes from config.seed and trains a SAERS-family model.
TrainResult Train(const TrainConfig& config, const SplitDataset& split, const FeatureCatalog& catalog);

}  // namespace saers

#endif  // SAERS_TRAINING_H_
