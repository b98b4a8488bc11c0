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


#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "saers/baselines.h"
#include "saers/evaluation.h"
#include "saers/localizer.h"
#include "saers/optimizer.h"
#include "saers/synthetic.h"

namespace saers {
namespace {

GradCheckCase Case(int d, int m) { return MakeGradCheckCase(d, Variant::kSaers, 1, m, m); }

void BM_ForwardTriple(benchmark::State& state) {
  const GradCheckCase c = Case(static_cast<int>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(ScoreTriple(c.params, c.user, c.pos, c.neg));
}
BENCHMARK(BM_ForwardTriple)->Arg(10)->Arg(30)->Arg(50)->Arg(100);

void BM_BackwardTriple(benchmark::State& state) {
  const GradCheckCase c = Case(static_cast<int>(state.range(0)), 64);
  const TripleForward fwd = ScoreTriple(c.params, c.user, c.pos, c.neg);
  ModelParams grad = ModelParams::Zeros(c.params.config, c.params.num_users());
  for (auto _ : state) benchmark::DoNotOptimize(Backward(fwd, c.params, 1e-4, 1.0, &grad));
}
BENCHMARK(BM_BackwardTriple)->Arg(10)->Arg(30)->Arg(50)->Arg(100);

void BM_AucRandom(benchmark::State& state) {
  const int users = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::string text;
  for (int u = 0; u < users; ++u) {
    for (int k = 0; k < 10; ++k) {
      text += "u" + std::to_string(u) + "\ti" + std::to_string(std::uniform_int_distribution<int>(0, 1999)(rng)) + "\n";
    }
  }
  const SplitDataset split = SplitLeaveOneOut(ParseInteractions(text, 3), 5);
  const RandomScorer scorer(3);
  for (auto _ : state) benchmark::DoNotOptimize(Auc(scorer, split, Scenario::kAll));
  state.SetItemsProcessed(state.iterations() * split.num_users() * split.num_items());
}
BENCHMARK(BM_AucRandom)->Arg(100)->Arg(1000);

void BM_LocalizeAttribute(benchmark::State& state) {
  const int channels = static_cast<int>(state.range(0));
  std::mt19937_64 rng(9);
  const PlantedMaps maps = MakePlantedMaps(channels, 7, 7, RegionBBox{2, 2, 4, 4, {7, 7}}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(LocalizeAttribute(maps.feature_maps, maps.grad_maps, {224, 224}));
}
BENCHMARK(BM_LocalizeAttribute)->Arg(64)->Arg(512);

}  // namespace
}  // namespace saers

BENCHMARK_MAIN();
