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

#ifndef SAERS_MODEL_H_
#define SAERS_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saers/feature_catalog.h"
#include "saers/linalg.h"
#include "saers/params.h"

namespace saers {

// kSafo: mean of transferred attribute features.
// kSaersMinusSaf: projected global feature only.
// kSaers: attention-weighted attribute features plus projected global feature.
enum class Variant { kSafo, kSaersMinusSaf, kSaers };

const char* VariantName(Variant v);
// Accepts "SAFo", "SAERS-SAF" / "saers_minus_saf", "SAERS" (case-insensitive).
Variant ParseVariant(std::string_view name);

inline constexpr int kDimensionGrid[] = {10, 30, 50, 100};

struct ModelConfig {
  int d = 10;
  int num_attributes = kNumAttributes;
  int m = 0;
  int m_g = 0;
  int hidden = 0;  // attention MLP width; 0 means "same as d"
  Variant variant = Variant::kSaers;

  int hidden_width() const { return hidden > 0 ? hidden : d; }
  void Validate() const;

  // hidden = 0 and hidden = d describe the same network.
  friend bool operator==(const ModelConfig& a, const ModelConfig& b) {
    return a.d == b.d && a.num_attributes == b.num_attributes && a.m == b.m && a.m_g == b.m_g &&
           a.hidden_width() == b.hidden_width() && a.variant == b.variant;
  }
};

struct ModelParams {
  ModelConfig config;
  Matrix user_embeddings;         // num_users x d
  std::vector<Matrix> transfer;   // A matrices, d x m
  Matrix global_projection;       // d x m_g
  Matrix attention_w1;            // hidden x 2d, columns [user ; attribute]
  Vec attention_b1;               // hidden
  Vec attention_w2;               // hidden
  double attention_b2 = 0.0;

  static ModelParams Zeros(const ModelConfig& config, int num_users);
  int num_users() const { return user_embeddings.rows; }

  std::vector<ParamBlock> Blocks();
  std::vector<ConstParamBlock> Blocks() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Every entry i.i.d. uniform on the open interval (-0.01, 0.01).
ModelParams InitParams(const ModelConfig& config, int num_users, std::uint64_t seed);

// Max-subtracted softmax.
Vec Softmax(std::span<const double> logits);
void SoftmaxInto(std::span<const double> logits, std::span<double> out);

// User-dependent parts of the forward pass.
struct UserProjection {
  Vec embedding;       // f(u)
  Vec attention_user;  // W1[:, :d] f(u)
};

// Item-dependent parts of the forward pass; independent of the user.
struct ItemProjection {
  Matrix transferred;     // A x d, row k = E^k f_a^k(i)
  Matrix attention_item;  // A x hidden, row k = W1[:, d:] E^k f_a^k(i)
  Vec global;             // d, W_g g_i (empty for kSafo)
};

struct ForwardCache {
  Matrix hidden_pre;  // A x hidden pre-activations (kSaers only)
  Vec logits;         // A attention logits including b2
  Vec weights;        // A attention weights
  Vec embedding;      // f(i)
  double score = 0.0;
};

UserProjection ProjectUser(const ModelParams& params, std::span<const double> user_embedding);
ItemProjection ProjectItem(const ModelParams& params, const ItemFeatures& item);
ForwardCache Combine(const ModelParams& params, const UserProjection& user, const ItemProjection& item);
// Same as above, reusing the buffers already held by `out`.
void Combine(const ModelParams& params, const UserProjection& user, const ItemProjection& item, ForwardCache* out);

struct AttentionResult {
  Vec logits;
  Vec weights;
};

// s_k = w2 . ReLU(W1 [u ; t_k] + b1) + b2, weights = softmax(s). `transferred`
// holds one row per attribute.
AttentionResult AttentionWeights(const ModelParams& params, std::span<const double> user_embedding,
                                 const Matrix& transferred);

struct ItemEmbedding {
  Vec embedding;
  Vec weights;  // uniform for variants without attention
};

ItemEmbedding ComputeItemEmbedding(const ModelParams& params, std::span<const double> user_embedding,
                                   const ItemFeatures& item);

inline double Predict(std::span<const double> user_embedding, std::span<const double> item_embedding) {
  return Dot(user_embedding, item_embedding);
}

// Forward passes for a (user, positive, negative) triple sharing f(u).
struct TripleForward {
  int user = 0;
  const ItemFeatures* pos = nullptr;
  const ItemFeatures* neg = nullptr;
  UserProjection user_proj;
  ItemProjection pos_proj;
  ItemProjection neg_proj;
  ForwardCache pos_cache;
  ForwardCache neg_cache;

  double pos_score() const { return pos_cache.score; }
  double neg_score() const { return neg_cache.score; }
};

TripleForward ScoreTriple(const ModelParams& params, int user, const ItemFeatures& pos, const ItemFeatures& neg);

// Throws DataError when feature dimensions disagree with the config.
void CheckItemShape(const ModelConfig& config, const ItemFeatures& item);

}  // namespace saers

#endif  // SAERS_MODEL_H_
