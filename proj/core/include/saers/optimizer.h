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

#ifndef SAERS_OPTIMIZER_H_
#define SAERS_OPTIMIZER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "saers/model.h"
#include "saers/params.h"

namespace saers {

inline constexpr double kLambdaGrid[] = {0.0, 1e-4, 1e-3, 1e-2, 0.1, 1.0};
inline constexpr double kLearningRateGrid[] = {1e-4, 1e-3, 1e-2};

struct TrainHyper {
  double lambda = 1e-4;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 256;

  void Validate() const;

  friend bool operator==(const TrainHyper&, const TrainHyper&) = default;
};

// -ln(sigmoid(x)), stable for every finite x.
double NegLogSigmoid(double x);

// Squared L2 norm of the parameters one triple touches: the user's row and
// every active shared tensor.
double RegularizationNorm(const ModelParams& params, int user);

// -ln sigma(pos - neg) + lambda * ||Theta||^2.
double BprLoss(double pos_score, double neg_score, const ModelParams& params, int user, double lambda);

// Forward pass plus BprLoss.
double TripleLoss(const ModelParams& params, int user, const ItemFeatures& pos, const ItemFeatures& neg,
                  double lambda);

// Adds `scale` * dL/dTheta for one triple into `grad` (same shapes as
// `params`) and returns the triple loss. Throws DataError when the cache
// does not match the parameter shapes.
double Backward(const TripleForward& forward, const ModelParams& params, double lambda, double scale,
                ModelParams* grad);

// Dense gradient of one triple.
ModelParams Backward(const TripleForward& forward, const ModelParams& params, double lambda);

// Bias-corrected Adam moments, one buffer pair per parameter block.
struct AdamState {
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;
  std::int64_t step = 0;
};

// params -= lr * m_hat / (sqrt(v_hat) + eps). Inactive blocks are skipped.
void AdamStep(const std::vector<ParamBlock>& params, const std::vector<ConstParamBlock>& grads,
              const TrainHyper& hyper, AdamState* state);

template <typename Params>
void AdamStep(Params& params, const Params& grads, const TrainHyper& hyper, AdamState* state) {
  AdamStep(params.Blocks(), grads.Blocks(), hyper, state);
}

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_block;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coordinates = 0;
};

// Central differences of TripleLoss over every coordinate of every block
// versus Backward. Relative error uses max(|a|, |n|, 1e-8). `stencil` is 3
// or 5 points; the 5-point rule at a wider step keeps round-off well below
// 1e-10 but needs the loss to be smooth within 2 * eps.
inline constexpr double kGradCheckEps = 1e-3;
inline constexpr int kGradCheckStencil = 5;
GradCheckReport FiniteDiffCheck(const ModelParams& params, int user, const ItemFeatures& pos,
                                const ItemFeatures& neg, double lambda, double eps = kGradCheckEps,
                                int stencil = kGradCheckStencil);

}  // namespace saers

#endif  // SAERS_OPTIMIZER_H_
