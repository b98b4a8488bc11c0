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

#include "saers/baselines.h"

#include <cctype>
#include <cmath>
#include <random>

#include "saers/error.h"
#include "saers/optimizer.h"
#include "saers/parallel.h"

namespace saers {
namespace {

std::vector<std::int64_t> Shape(const Matrix& m) { return {m.rows, m.cols}; }
std::vector<std::int64_t> Shape(const Vec& v) { return {static_cast<std::int64_t>(v.size())}; }

template <typename Block, typename M>
void Push(std::vector<Block>& out, const char* name, M& m) {
  using T = std::remove_reference_t<decltype(*out[0].values.data())>;
  if constexpr (requires { m.data; }) {
    out.push_back(Block{name, Shape(m), std::span<T>(m.data), true});
  } else {
    out.push_back(Block{name, Shape(m), std::span<T>(m), true});
  }
}

void FillUniform(std::span<double> v, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.01, 0.01);
  for (double& x : v) x = dist(rng);
}

// -d/dx ln sigma(x) = sigma(-x)
double NegSigmoidGrad(double x) {
  return x >= 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
}

void InitWarmRows(Matrix& m, const SplitDataset& split, std::mt19937_64& rng) {
  for (int i = 0; i < m.rows; ++i) {
    if (!split.is_cold(i)) FillUniform(m.row(i), rng);
  }
}

}  // namespace

double RandomScorer::Score(int user, int item) const {
  const std::uint64_t h = DeriveSeed(DeriveSeed(seed_, static_cast<std::uint64_t>(user)), static_cast<std::uint64_t>(item));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

PopRankScorer::PopRankScorer(const SplitDataset& split) : counts_(static_cast<std::size_t>(split.num_items())) {
  for (int i = 0; i < split.num_items(); ++i) counts_[static_cast<std::size_t>(i)] = static_cast<double>(split.train.popularity(i));
}

BprMfParams BprMfParams::Zeros(int users, int items, int k) {
  return {Matrix(users, k), Matrix(items, k), Vec(static_cast<std::size_t>(items), 0.0)};
}

std::vector<ParamBlock> BprMfParams::Blocks() {
  std::vector<ParamBlock> out;
  Push(out, "user_factors", user_factors);
  Push(out, "item_factors", item_factors);
  Push(out, "item_bias", item_bias);
  return out;
}

std::vector<ConstParamBlock> BprMfParams::Blocks() const {
  std::vector<ConstParamBlock> out;
  Push(out, "user_factors", user_factors);
  Push(out, "item_factors", item_factors);
  Push(out, "item_bias", item_bias);
  return out;
}

BprMf::BprMf(const SplitDataset& split, int k, std::uint64_t seed)
    : params_(Params::Zeros(split.num_users(), split.num_items(), k)) {
  if (k < 1) throw ConfigError("bpr-mf: latent width must be >= 1");
  std::mt19937_64 rng(seed);
  FillUniform(params_.user_factors.data, rng);
  InitWarmRows(params_.item_factors, split, rng);
}

BprMf::Params BprMf::ZeroGradient() const {
  return Params::Zeros(params_.user_factors.rows, params_.item_factors.rows, params_.user_factors.cols);
}

double BprMf::Score(int user, int item) const {
  return params_.item_bias[static_cast<std::size_t>(item)] +
         Dot(params_.user_factors.row(user), params_.item_factors.row(item));
}

double BprMf::AccumulateTriple(const Triple& t, double lambda, double scale, Params* grad) const {
  const Params& p = params_;
  const auto gu = p.user_factors.row(t.user);
  const auto gi = p.item_factors.row(t.pos);
  const auto gj = p.item_factors.row(t.neg);
  const double bi = p.item_bias[static_cast<std::size_t>(t.pos)];
  const double bj = p.item_bias[static_cast<std::size_t>(t.neg)];
  const double x = Score(t.user, t.pos) - Score(t.user, t.neg);
  const double reg = SquaredNorm(gu) + SquaredNorm(gi) + SquaredNorm(gj) + bi * bi + bj * bj;
  const double g = -NegSigmoidGrad(x) * scale;
  const double r = 2.0 * lambda * scale;

  auto du = grad->user_factors.row(t.user);
  auto di = grad->item_factors.row(t.pos);
  auto dj = grad->item_factors.row(t.neg);
  for (std::size_t c = 0; c < gu.size(); ++c) {
    du[c] += g * (gi[c] - gj[c]) + r * gu[c];
    di[c] += g * gu[c] + r * gi[c];
    dj[c] += -g * gu[c] + r * gj[c];
  }
  grad->item_bias[static_cast<std::size_t>(t.pos)] += g + r * bi;
  grad->item_bias[static_cast<std::size_t>(t.neg)] += -g + r * bj;
  return NegLogSigmoid(x) + lambda * reg;
}

namespace {

class BprMfScorer : public Scorer {
 public:
  explicit BprMfScorer(BprMf model) : model_(std::move(model)) {}
  std::string name() const override { return "bpr-mf"; }
  double Score(int user, int item) const override { return model_.Score(user, item); }

 private:
  BprMf model_;
};

// Caches E g_i per item.
class VbprScorer : public Scorer {
 public:
  explicit VbprScorer(const Vbpr& model) : params_(model.params()) {
    const Matrix& e = params_.embedding;
    visual_ = Matrix(static_cast<int>(model.items().size()), e.rows);
    for (int i = 0; i < visual_.rows; ++i) MatVec(e, model.items()[static_cast<std::size_t>(i)]->global_feat, visual_.row(i));
  }
  std::string name() const override { return "vbpr"; }
  double Score(int user, int item) const override {
    return params_.item_bias[static_cast<std::size_t>(item)] +
           Dot(params_.user_factors.row(user), params_.item_factors.row(item)) +
           Dot(params_.user_visual.row(user), visual_.row(item));
  }

 private:
  VbprParams params_;
  Matrix visual_;
};

}  // namespace

std::unique_ptr<Scorer> BprMf::MakeScorer() const { return std::make_unique<BprMfScorer>(*this); }

VbprParams VbprParams::Zeros(int users, int items, int k, int k_v, int m_g) {
  return {Matrix(users, k), Matrix(users, k_v), Matrix(items, k), Vec(static_cast<std::size_t>(items), 0.0),
          Matrix(k_v, m_g)};
}

std::vector<ParamBlock> VbprParams::Blocks() {
  std::vector<ParamBlock> out;
  Push(out, "user_factors", user_factors);
  Push(out, "user_visual", user_visual);
  Push(out, "item_factors", item_factors);
  Push(out, "item_bias", item_bias);
  Push(out, "embedding", embedding);
  return out;
}

std::vector<ConstParamBlock> VbprParams::Blocks() const {
  std::vector<ConstParamBlock> out;
  Push(out, "user_factors", user_factors);
  Push(out, "user_visual", user_visual);
  Push(out, "item_factors", item_factors);
  Push(out, "item_bias", item_bias);
  Push(out, "embedding", embedding);
  return out;
}

Vbpr::Vbpr(const SplitDataset& split, std::vector<const ItemFeatures*> items, int d, std::uint64_t seed)
    : items_(std::move(items)) {
  if (d < 2) throw ConfigError("vbpr: d must be >= 2");
  if (items_.size() != static_cast<std::size_t>(split.num_items())) throw DataError("vbpr: item table size mismatch");
  const int m_g = static_cast<int>(items_.empty() ? 0 : items_[0]->global_feat.size());
  for (const ItemFeatures* it : items_) {
    if (it == nullptr || static_cast<int>(it->global_feat.size()) != m_g) throw DataError("vbpr: inconsistent global features");
  }
  params_ = Params::Zeros(split.num_users(), split.num_items(), d / 2, d - d / 2, m_g);
  std::mt19937_64 rng(seed);
  FillUniform(params_.user_factors.data, rng);
  FillUniform(params_.user_visual.data, rng);
  InitWarmRows(params_.item_factors, split, rng);
  FillUniform(params_.embedding.data, rng);
}

Vbpr::Params Vbpr::ZeroGradient() const {
  return Params::Zeros(params_.user_factors.rows, params_.item_factors.rows, params_.user_factors.cols,
                       params_.user_visual.cols, params_.embedding.cols);
}

double Vbpr::Score(int user, int item) const {
  const auto& g = items_[static_cast<std::size_t>(item)]->global_feat;
  Vec proj(static_cast<std::size_t>(params_.embedding.rows));
  MatVec(params_.embedding, g, proj);
  return params_.item_bias[static_cast<std::size_t>(item)] +
         Dot(params_.user_factors.row(user), params_.item_factors.row(item)) +
         Dot(params_.user_visual.row(user), proj);
}

double Vbpr::AccumulateTriple(const Triple& t, double lambda, double scale, Params* grad) const {
  const Params& p = params_;
  const auto& fi = items_[static_cast<std::size_t>(t.pos)]->global_feat;
  const auto& fj = items_[static_cast<std::size_t>(t.neg)]->global_feat;
  Vec diff(fi.size());
  for (std::size_t c = 0; c < fi.size(); ++c) diff[c] = fi[c] - fj[c];
  Vec proj_diff(static_cast<std::size_t>(p.embedding.rows));
  MatVec(p.embedding, diff, proj_diff);

  const auto gu = p.user_factors.row(t.user);
  const auto tu = p.user_visual.row(t.user);
  const auto gi = p.item_factors.row(t.pos);
  const auto gj = p.item_factors.row(t.neg);
  const double bi = p.item_bias[static_cast<std::size_t>(t.pos)];
  const double bj = p.item_bias[static_cast<std::size_t>(t.neg)];
  double x = bi - bj + Dot(tu, proj_diff);
  for (std::size_t c = 0; c < gu.size(); ++c) x += gu[c] * (gi[c] - gj[c]);

  const double reg = SquaredNorm(gu) + SquaredNorm(tu) + SquaredNorm(gi) + SquaredNorm(gj) + bi * bi + bj * bj +
                     SquaredNorm(p.embedding.data);
  const double g = -NegSigmoidGrad(x) * scale;
  const double r = 2.0 * lambda * scale;

  auto du = grad->user_factors.row(t.user);
  auto di = grad->item_factors.row(t.pos);
  auto dj = grad->item_factors.row(t.neg);
  for (std::size_t c = 0; c < gu.size(); ++c) {
    du[c] += g * (gi[c] - gj[c]) + r * gu[c];
    di[c] += g * gu[c] + r * gi[c];
    dj[c] += -g * gu[c] + r * gj[c];
  }
  auto dt = grad->user_visual.row(t.user);
  for (std::size_t c = 0; c < tu.size(); ++c) dt[c] += g * proj_diff[c] + r * tu[c];
  grad->item_bias[static_cast<std::size_t>(t.pos)] += g + r * bi;
  grad->item_bias[static_cast<std::size_t>(t.neg)] += -g + r * bj;
  AddOuter(grad->embedding, g, tu, diff);
  Axpy(r, p.embedding.data, grad->embedding.data);
  return NegLogSigmoid(x) + lambda * reg;
}

std::unique_ptr<Scorer> Vbpr::MakeScorer() const { return std::make_unique<VbprScorer>(*this); }

const char* BaselineName(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kRandom:
      return "random";
    case BaselineKind::kPopRank:
      return "poprank";
    case BaselineKind::kBprMf:
      return "bpr-mf";
    case BaselineKind::kVbpr:
      return "vbpr";
  }
  return "?";
}

BaselineKind ParseBaseline(std::string_view name) {
  std::string s(name);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "random") return BaselineKind::kRandom;
  if (s == "poprank" || s == "pop") return BaselineKind::kPopRank;
  if (s == "bpr-mf" || s == "bprmf" || s == "bpr_mf") return BaselineKind::kBprMf;
  if (s == "vbpr") return BaselineKind::kVbpr;
  throw ConfigError("unknown baseline '" + std::string(name) + "'");
}

std::unique_ptr<Scorer> MakeBaseline(BaselineKind kind, const SplitDataset& split, const FeatureCatalog* catalog,
                                     const TrainConfig& config, TrainStats* stats) {
  switch (kind) {
    case BaselineKind::kRandom:
      return std::make_unique<RandomScorer>(config.seed);
    case BaselineKind::kPopRank:
      return std::make_unique<PopRankScorer>(split);
    case BaselineKind::kBprMf: {
      BprMf model(split, config.d, config.seed);
      TrainStats s = TrainPairwise(model, split, config);
      if (stats != nullptr) *stats = std::move(s);
      return model.MakeScorer();
    }
    case BaselineKind::kVbpr: {
      if (catalog == nullptr) throw ConfigError("vbpr needs item features");
      Vbpr model(split, AlignItems(split, *catalog), config.d, config.seed);
      TrainStats s = TrainPairwise(model, split, config);
      if (stats != nullptr) *stats = std::move(s);
      return model.MakeScorer();
    }
  }
  throw ConfigError("unknown baseline");
}

}  // namespace saers
