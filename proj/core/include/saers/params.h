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

#ifndef SAERS_PARAMS_H_
#define SAERS_PARAMS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace saers {

// Named view of one parameter tensor. `active` is false for tensors the
// current model variant never reads; they are neither regularized nor
// updated in a meaningful way.
template <typename T>
struct BasicParamBlock {
  std::string name;
  std::vector<std::int64_t> shape;
  std::span<T> values;
  bool active = true;
};

using ParamBlock = BasicParamBlock<double>;
using ConstParamBlock = BasicParamBlock<const double>;

}  // namespace saers

#endif  // SAERS_PARAMS_H_
