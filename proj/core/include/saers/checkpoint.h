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

#ifndef SAERS_CHECKPOINT_H_
#define SAERS_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "saers/model.h"
#include "saers/training.h"

namespace saers {

inline constexpr int kCheckpointVersion = 1;
inline constexpr char kCheckpointFormat[] = "saers-checkpoint";

struct Checkpoint {
  ModelParams params;
  TrainConfig config;
  TrainStats stats;
  std::vector<std::string> user_ids;  // row order of user_embeddings
};

// Writes manifest.json plus one f64 .sat per parameter block. The output
// bytes depend only on the arguments.
void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& dir);

// Throws FormatError on a foreign or newer manifest, DataError naming the
// tensor when a block file is missing, ConfigError when a tensor's shape
// disagrees with the stored config.
Checkpoint LoadCheckpoint(const std::filesystem::path& dir);

std::string ModelConfigToJson(const ModelConfig& config);

}  // namespace saers

#endif  // SAERS_CHECKPOINT_H_
