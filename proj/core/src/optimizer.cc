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

#include "saers/optimizer.h"

#include <algorithm>
#include <cmath>

#include "saers/error.h"

namespace saers {
namespace {

void CheckCache(const TripleForward& fwd, const ModelParams& p, const ModelParams& grad) {
  const ModelConfig& c = p.config;
  auto bad = [] { throw DataError("stale forward cache: shapes do not match parameters"); };
  if (fwd.pos == nullptr || fwd.neg == nullptr) bad();
  if (fwd.user < 0 || fwd.user >= p.num_users()) bad();
  if (static_cast<int>(fwd.user_proj.embedding.size()) != c.d) bad();
  for (const ForwardCache* fc : {&fwd.pos_cache, &fwd.neg_cache}) {
    if (static_cast<int>(fc->embedding.size()) != c.d) bad();
    if (static_cast<int>(fc->weights.size()) != c.num_attributes) bad();
    if (c.variant == Variant::kSaers && fc->hidden_pre.rows != c.num_attributes) bad();
  }
  for (const ItemProjection* ip : {&fwd.pos_proj, &fwd.neg_proj}) {
    if (c.variant != Variant::kSaersMinusSaf && (ip->transferred.rows != c.num_attributes || ip->transferred.cols != c.d)) bad();
  }
  if (grad.config.d != c.d || grad.num_users() != p.num_users() || grad.transfer.size() != p.transfer.size()) bad();
}

// Backpropagates dL/dscore = `delta` through one item's forward pass.
// Accumulates the user-embedding gradient into `du` (unscaled).
void ItemBackward(const ModelParams& p, const UserProjection& up, const ItemProjection& ip, const ForwardCache& fc,
                  const ItemFeatures& feats, double delta, double scale, ModelParams* g, Vec* du) {
  const ModelConfig& c = p.config;
  const auto d = static_cast<std::size_t>(c.d);
  const int a = c.num_attributes;

  Vec df(d);
  for (std::size_t r = 0; r < d; ++r) df[r] = delta * up.embedding[r];
  Axpy(delta, fc.embedding, *du);

  if (c.variant != Variant::kSafo) AddOuter(g->global_projection, scale, df, feats.global_feat);
  if (c.variant == Variant::kSaersMinusSaf) return;

  Matrix dt(a, c.d);
  for (int k = 0; k < a; ++k) Axpy(fc.weights[static_cast<std::size_t>(k)], df, dt.row(k));

  if (c.variant == Variant::kSaers) {
    const int hidden = c.hidden_width();
    Vec dalpha(static_cast<std::size_t>(a));
    double mean = 0.0;
    for (int k = 0; k < a; ++k) {
      dalpha[static_cast<std::size_t>(k)] = Dot(df, ip.transferred.row(k));
      mean += fc.weights[static_cast<std::size_t>(k)] * dalpha[static_cast<std::size_t>(k)];
    }
    Vec dz(static_cast<std::size_t>(hidden));
    Vec h(static_cast<std::size_t>(hidden));
    for (int k = 0; k < a; ++k) {
      const double ds = fc.weights[static_cast<std::size_t>(k)] * (dalpha[static_cast<std::size_t>(k)] - mean);
      const auto z = fc.hidden_pre.row(k);
      for (int j = 0; j < hidden; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const bool on = z[jj] > 0.0;
        h[jj] = on ? z[jj] : 0.0;
        dz[jj] = on ? ds * p.attention_w2[jj] : 0.0;
      }
      Axpy(scale * ds, h, g->attention_w2);
      // b2 shifts every logit equally and cancels in the softmax: its data
      // gradient is exactly zero.
      Axpy(scale, dz, g->attention_b1);
      AddOuterCols(g->attention_w1, 0, scale, dz, up.embedding);
      AddOuterCols(g->attention_w1, c.d, scale, dz, ip.transferred.row(k));
      AddMatTVecCols(p.attention_w1, 0, dz, *du);
      AddMatTVecCols(p.attention_w1, c.d, dz, dt.row(k));
    }
  }

  for (int k = 0; k < a; ++k) {
    AddOuter(g->transfer[static_cast<std::size_t>(k)], scale, dt.row(k), feats.attr_feats[static_cast<std::size_t>(k)]);
  }
}

}  // namespace

void TrainHyper::Validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be a finite value >= 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("Adam betas must lie in [0,1)");
  if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

double NegLogSigmoid(double x) {
  // -ln sigma(x) = ln(1 + e^-x)
  if (x >= 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

double RegularizationNorm(const ModelParams& params, int user) {
  double total = SquaredNorm(params.user_embeddings.row(user));
  for (const ConstParamBlock& b : params.Blocks()) {
    if (b.active && b.name != "user_embeddings") total += SquaredNorm(b.values);
  }
  return total;
}

double BprLoss(double pos_score, double neg_score, const ModelParams& params, int user, double lambda) {
  const double data = NegLogSigmoid(pos_score - neg_score);
  return lambda == 0.0 ? data : data + lambda * RegularizationNorm(params, user);
}

double TripleLoss(const ModelParams& params, int user, const ItemFeatures& pos, const ItemFeatures& neg,
                  double lambda) {
  const TripleForward f = ScoreTriple(params, user, pos, neg);
  return BprLoss(f.pos_score(), f.neg_score(), params, user, lambda);
}

double Backward(const TripleForward& fwd, const ModelParams& params, double lambda, double scale,
                ModelParams* grad) {
  CheckCache(fwd, params, *grad);
  const double x = fwd.pos_score() - fwd.neg_score();
  // d/dx of -ln sigma(x) is -sigma(-x).
  const double sig_neg = 1.0 / (1.0 + std::exp(x));
  Vec du(static_cast<std::size_t>(params.config.d), 0.0);
  ItemBackward(params, fwd.user_proj, fwd.pos_proj, fwd.pos_cache, *fwd.pos, -sig_neg, scale, grad, &du);
  ItemBackward(params, fwd.user_proj, fwd.neg_proj, fwd.neg_cache, *fwd.neg, sig_neg, scale, grad, &du);
  Axpy(scale, du, grad->user_embeddings.row(fwd.user));

  if (lambda != 0.0) {
    const double r = scale * 2.0 * lambda;
    Axpy(r, params.user_embeddings.row(fwd.user), grad->user_embeddings.row(fwd.user));
    auto gblocks = grad->Blocks();
    const auto pblocks = params.Blocks();
    for (std::size_t b = 0; b < pblocks.size(); ++b) {
      if (!pblocks[b].active || pblocks[b].name == "user_embeddings") continue;
      Axpy(r, pblocks[b].values, gblocks[b].values);
    }
  }
  return BprLoss(fwd.pos_score(), fwd.neg_score(), params, fwd.user, lambda);
}

ModelParams Backward(const TripleForward& fwd, const ModelParams& params, double lambda) {
  ModelParams grad = ModelParams::Zeros(params.config, params.num_users());
  Backward(fwd, params, lambda, 1.0, &grad);
  return grad;
}

void AdamStep(const std::vector<ParamBlock>& params, const std::vector<ConstParamBlock>& grads,
              const TrainHyper& hyper, AdamState* state) {
  if (params.size() != grads.size()) throw DataError("gradient block count does not match parameters");
  if (state->first.empty()) {
    for (const ParamBlock& b : params) {
      state->first.emplace_back(b.values.size(), 0.0);
      state->second.emplace_back(b.values.size(), 0.0);
    }
  }
  if (state->first.size() != params.size()) throw DataError("Adam state does not match parameters");
  ++state->step;
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state->step));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state->step));
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (!params[b].active) continue;
    auto& m = state->first[b];
    auto& v = state->second[b];
    const auto theta = params[b].values;
    const auto g = grads[b].values;
    if (g.size() != theta.size() || m.size() != theta.size()) throw DataError("block '" + params[b].name + "' size mismatch");
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g[i];
      v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      theta[i] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
    }
  }
}

GradCheckReport FiniteDiffCheck(const ModelParams& params, int user, const ItemFeatures& pos,
                                const ItemFeatures& neg, double lambda, double eps, int stencil) {
  if (stencil != 3 && stencil != 5) throw ConfigError("finite-difference stencil must have 3 or 5 points");
  if (!(eps > 0.0)) throw ConfigError("finite-difference step must be > 0");
  const ModelParams analytic = Backward(ScoreTriple(params, user, pos, neg), params, lambda);
  const auto gblocks = analytic.Blocks();
  ModelParams probe = params;
  auto pblocks = probe.Blocks();
  GradCheckReport report;
  for (std::size_t b = 0; b < pblocks.size(); ++b) {
    for (std::size_t i = 0; i < pblocks[b].values.size(); ++i) {
      double& theta = pblocks[b].values[i];
      const double saved = theta;
      auto at = [&](double offset) {
        theta = saved + offset;
        return TripleLoss(probe, user, pos, neg, lambda);
      };
      double numeric;
      if (stencil == 3) {
        numeric = (at(eps) - at(-eps)) / (2.0 * eps);
      } else {
        numeric = (8.0 * (at(eps) - at(-eps)) - (at(2.0 * eps) - at(-2.0 * eps))) / (12.0 * eps);
      }
      theta = saved;
      const double a = gblocks[b].values[i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
      ++report.coordinates;
      if (rel > report.max_rel_error || report.worst_block.empty()) {
        report.max_rel_error = rel;
        report.worst_block = pblocks[b].name;
        report.worst_index = i;
        report.analytic = a;
        report.numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace saers
