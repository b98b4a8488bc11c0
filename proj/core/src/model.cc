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

#include "saers/model.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <random>
#include <string>

#include "saers/error.h"

namespace saers {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::int64_t> Shape(const Matrix& m) { return {m.rows, m.cols}; }

template <typename Block, typename Params>
std::vector<Block> CollectBlocks(Params& p) {
  const Variant v = p.config.variant;
  const bool attrs = v != Variant::kSaersMinusSaf;
  const bool global = v != Variant::kSafo;
  const bool attention = v == Variant::kSaers;
  std::vector<Block> blocks;
  blocks.push_back({"user_embeddings", Shape(p.user_embeddings), p.user_embeddings.data, true});
  for (std::size_t k = 0; k < p.transfer.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "transfer_%02zu", k);
    blocks.push_back({name, Shape(p.transfer[k]), p.transfer[k].data, attrs});
  }
  blocks.push_back({"global_projection", Shape(p.global_projection), p.global_projection.data, global});
  blocks.push_back({"attention_w1", Shape(p.attention_w1), p.attention_w1.data, attention});
  blocks.push_back({"attention_b1", {static_cast<std::int64_t>(p.attention_b1.size())}, p.attention_b1, attention});
  blocks.push_back({"attention_w2", {static_cast<std::int64_t>(p.attention_w2.size())}, p.attention_w2, attention});
  blocks.push_back({"attention_b2", {1}, {&p.attention_b2, 1}, attention});
  return blocks;
}

// Attention over rows of `attention_item` given the user part. Logits keep
// b2; the softmax runs on the b2-free scores since a shared shift cancels.
// Reuses the capacity of the output buffers.
void AttentionForward(const ModelParams& p, std::span<const double> attention_user, const Matrix& attention_item,
                      Matrix* hidden_pre, Vec* logits, Vec* weights) {
  const int a = attention_item.rows;
  const int hidden = p.config.hidden_width();
  hidden_pre->rows = a;
  hidden_pre->cols = hidden;
  hidden_pre->data.resize(static_cast<std::size_t>(a) * hidden);
  logits->resize(static_cast<std::size_t>(a));
  weights->resize(static_cast<std::size_t>(a));
  for (int k = 0; k < a; ++k) {
    auto z = hidden_pre->row(k);
    const auto item_part = attention_item.row(k);
    double s = 0.0;
    for (int h = 0; h < hidden; ++h) {
      const auto hh = static_cast<std::size_t>(h);
      z[hh] = attention_user[hh] + item_part[hh] + p.attention_b1[hh];
      if (z[hh] > 0.0) s += p.attention_w2[hh] * z[hh];
    }
    (*logits)[static_cast<std::size_t>(k)] = s;
  }
  SoftmaxInto(*logits, *weights);
  for (double& s : *logits) s += p.attention_b2;
}

}  // namespace

const char* VariantName(Variant v) {
  switch (v) {
    case Variant::kSafo: return "SAFo";
    case Variant::kSaersMinusSaf: return "SAERS-SAF";
    case Variant::kSaers: return "SAERS";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  const std::string s = Lower(name);
  if (s == "safo") return Variant::kSafo;
  if (s == "saers-saf" || s == "saers_minus_saf" || s == "saers-minus-saf") return Variant::kSaersMinusSaf;
  if (s == "saers") return Variant::kSaers;
  throw ConfigError("unknown model variant '" + std::string(name) + "'");
}

void ModelConfig::Validate() const {
  if (d < 1) throw ConfigError("d must be >= 1");
  if (num_attributes < 1) throw ConfigError("attribute count must be >= 1");
  if (m < 1 || m_g < 1) throw ConfigError("feature dimensions m and m_g must be >= 1");
  if (hidden < 0) throw ConfigError("hidden width must be >= 1");
}

ModelParams ModelParams::Zeros(const ModelConfig& config, int num_users) {
  config.Validate();
  if (num_users < 1) throw ConfigError("model needs at least one user");
  ModelParams p;
  p.config = config;
  const int h = config.hidden_width();
  p.user_embeddings = Matrix(num_users, config.d);
  p.transfer.assign(static_cast<std::size_t>(config.num_attributes), Matrix(config.d, config.m));
  p.global_projection = Matrix(config.d, config.m_g);
  p.attention_w1 = Matrix(h, 2 * config.d);
  p.attention_b1.assign(static_cast<std::size_t>(h), 0.0);
  p.attention_w2.assign(static_cast<std::size_t>(h), 0.0);
  p.attention_b2 = 0.0;
  return p;
}

std::vector<ParamBlock> ModelParams::Blocks() { return CollectBlocks<ParamBlock>(*this); }
std::vector<ConstParamBlock> ModelParams::Blocks() const { return CollectBlocks<ConstParamBlock>(*this); }

ModelParams InitParams(const ModelConfig& config, int num_users, std::uint64_t seed) {
  ModelParams p = ModelParams::Zeros(config, num_users);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.01, 0.01);
  for (ParamBlock& b : p.Blocks()) {
    for (double& v : b.values) {
      do {
        v = dist(rng);
      } while (v == -0.01);
    }
  }
  return p;
}

void SoftmaxInto(std::span<const double> logits, std::span<double> out) {
  if (logits.empty()) return;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - peak);
    total += out[k];
  }
  for (std::size_t k = 0; k < logits.size(); ++k) out[k] /= total;
}

Vec Softmax(std::span<const double> logits) {
  Vec out(logits.size());
  SoftmaxInto(logits, out);
  return out;
}

void CheckItemShape(const ModelConfig& config, const ItemFeatures& item) {
  if (static_cast<int>(item.attr_feats.size()) != config.num_attributes) {
    throw DataError("item has " + std::to_string(item.attr_feats.size()) + " attribute features, model expects " +
                    std::to_string(config.num_attributes));
  }
  for (const auto& f : item.attr_feats) {
    if (static_cast<int>(f.size()) != config.m) throw DataError("attribute feature length does not match m");
  }
  if (static_cast<int>(item.global_feat.size()) != config.m_g) {
    throw DataError("global feature length does not match m_g");
  }
}

UserProjection ProjectUser(const ModelParams& params, std::span<const double> user_embedding) {
  UserProjection up;
  up.embedding.assign(user_embedding.begin(), user_embedding.end());
  if (params.config.variant == Variant::kSaers) {
    up.attention_user.assign(static_cast<std::size_t>(params.config.hidden_width()), 0.0);
    MatVecCols(params.attention_w1, 0, up.embedding, up.attention_user);
  }
  return up;
}

ItemProjection ProjectItem(const ModelParams& params, const ItemFeatures& item) {
  const ModelConfig& c = params.config;
  CheckItemShape(c, item);
  ItemProjection ip;
  if (c.variant != Variant::kSaersMinusSaf) {
    ip.transferred = Matrix(c.num_attributes, c.d);
    for (int k = 0; k < c.num_attributes; ++k) {
      MatVec(params.transfer[static_cast<std::size_t>(k)], item.attr_feats[static_cast<std::size_t>(k)],
             ip.transferred.row(k));
    }
  }
  if (c.variant == Variant::kSaers) {
    ip.attention_item = Matrix(c.num_attributes, c.hidden_width());
    for (int k = 0; k < c.num_attributes; ++k) {
      MatVecCols(params.attention_w1, c.d, ip.transferred.row(k), ip.attention_item.row(k));
    }
  }
  if (c.variant != Variant::kSafo) {
    ip.global.assign(static_cast<std::size_t>(c.d), 0.0);
    MatVec(params.global_projection, item.global_feat, ip.global);
  }
  return ip;
}

void Combine(const ModelParams& params, const UserProjection& user, const ItemProjection& item, ForwardCache* fc) {
  const ModelConfig& c = params.config;
  const auto a = static_cast<std::size_t>(c.num_attributes);
  fc->embedding.assign(static_cast<std::size_t>(c.d), 0.0);
  switch (c.variant) {
    case Variant::kSaers:
      AttentionForward(params, user.attention_user, item.attention_item, &fc->hidden_pre, &fc->logits, &fc->weights);
      break;
    case Variant::kSafo:
    case Variant::kSaersMinusSaf:
      fc->hidden_pre = Matrix();
      fc->logits.assign(a, 0.0);
      fc->weights.assign(a, 1.0 / static_cast<double>(a));
      break;
  }
  if (c.variant != Variant::kSaersMinusSaf) {
    for (std::size_t k = 0; k < a; ++k) Axpy(fc->weights[k], item.transferred.row(static_cast<int>(k)), fc->embedding);
  }
  if (c.variant != Variant::kSafo) Axpy(1.0, item.global, fc->embedding);
  fc->score = Predict(user.embedding, fc->embedding);
}

ForwardCache Combine(const ModelParams& params, const UserProjection& user, const ItemProjection& item) {
  ForwardCache fc;
  Combine(params, user, item, &fc);
  return fc;
}

AttentionResult AttentionWeights(const ModelParams& params, std::span<const double> user_embedding,
                                 const Matrix& transferred) {
  const ModelConfig& c = params.config;
  if (static_cast<int>(user_embedding.size()) != c.d || transferred.cols != c.d) {
    throw DataError("attention inputs must have length d");
  }
  Vec attention_user(static_cast<std::size_t>(c.hidden_width()), 0.0);
  MatVecCols(params.attention_w1, 0, user_embedding, attention_user);
  Matrix attention_item(transferred.rows, c.hidden_width());
  for (int k = 0; k < transferred.rows; ++k) {
    MatVecCols(params.attention_w1, c.d, transferred.row(k), attention_item.row(k));
  }
  AttentionResult r;
  Matrix hidden_pre;
  AttentionForward(params, attention_user, attention_item, &hidden_pre, &r.logits, &r.weights);
  return r;
}

ItemEmbedding ComputeItemEmbedding(const ModelParams& params, std::span<const double> user_embedding,
                                   const ItemFeatures& item) {
  if (static_cast<int>(user_embedding.size()) != params.config.d) throw DataError("user embedding length != d");
  ForwardCache fc = Combine(params, ProjectUser(params, user_embedding), ProjectItem(params, item));
  return {std::move(fc.embedding), std::move(fc.weights)};
}

TripleForward ScoreTriple(const ModelParams& params, int user, const ItemFeatures& pos, const ItemFeatures& neg) {
  if (user < 0 || user >= params.num_users()) throw DataError("user index out of range");
  TripleForward t;
  t.user = user;
  t.pos = &pos;
  t.neg = &neg;
  t.user_proj = ProjectUser(params, params.user_embeddings.row(user));
  t.pos_proj = ProjectItem(params, pos);
  t.neg_proj = ProjectItem(params, neg);
  t.pos_cache = Combine(params, t.user_proj, t.pos_proj);
  t.neg_cache = Combine(params, t.user_proj, t.neg_proj);
  return t;
}

}  // namespace saers
