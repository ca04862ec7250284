// Copyright 2026 The sympref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "sympref/diagnostics.h"
#include "sympref/losses.h"
#include "sympref/prefgen.h"

namespace sympref {
namespace {

void BM_BruteForceOracle(benchmark::State& state) {
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  std::vector<double> r(k);
  for (std::size_t i = 0; i < k; ++i) r[i] = 0.7 * static_cast<double>(i);
  const SpacePtr space = MakeSpace(r);
  const PreferenceDataset ds = MakeExactBtUniform(space);
  const LossSpec loss = MakeLoss(LossKind::kLogistic);
  for (auto _ : state) benchmark::DoNotOptimize(BruteForceRiskMinimizer(*space, loss, ds));
}
BENCHMARK(BM_BruteForceOracle)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_OptimalConditionalRisk(benchmark::State& state) {
  const LossSpec loss = MakeLoss(LossKind::kSigmoid);
  for (auto _ : state) benchmark::DoNotOptimize(OptimalConditionalRisk(loss, 0.7));
}
BENCHMARK(BM_OptimalConditionalRisk);

}  // namespace
}  // namespace sympref
