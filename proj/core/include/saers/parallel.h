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

#ifndef SAERS_PARALLEL_H_
#define SAERS_PARALLEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>

namespace saers {

// Hardware concurrency, at least 1.
int DefaultThreads();

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items are
// claimed dynamically, so fn must not depend on which worker runs it.
// The first exception thrown by fn is rethrown after all workers join.
void ParallelFor(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// SplitMix64 mix of (master, stream): independent per-stream seeds that do
// not depend on thread count or scheduling.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

}  // namespace saers

#endif  // SAERS_PARALLEL_H_
