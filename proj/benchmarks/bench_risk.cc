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

#include "sympref/losses.h"
#include "sympref/policy.h"
#include "sympref/prefgen.h"
#include "sympref/riskcore.h"

namespace sympref {
namespace {

PreferenceDataset NoisyDigits(std::size_t n) {
  TabularOptions opt;
  opt.n_pairs = n;
  PreferenceDataset ds = GenerateTabular(opt, 1);
  Rng rng(1, Stream::kNoise);
  return InjectNoise(ds, NoiseSpec::Symmetric(0.3), rng);
}

void BM_RiskGradient(benchmark::State& state) {
  const PreferenceDataset ds = NoisyDigits(static_cast<std::size_t>(state.range(0)));
  const RewardModel model = RewardModel::Tabular({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const LossSpec loss = MakeLoss(LossKind::kSigmoid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RiskGradient(model, ds, loss, LabelView::kNoisy));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RiskGradient)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_TrainReward(benchmark::State& state) {
  const PreferenceDataset ds = NoisyDigits(10000);
  TrainConfig tc;
  tc.learning_rate = 1.0;
  tc.epochs = static_cast<int>(state.range(0));
  tc.loss = MakeLoss(LossKind::kSigmoid);
  for (auto _ : state) benchmark::DoNotOptimize(TrainReward(ds, tc));
}
BENCHMARK(BM_TrainReward)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_OptimalPolicy(benchmark::State& state) {
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  std::vector<double> r(k);
  for (std::size_t i = 0; i < k; ++i) r[i] = static_cast<double>(i % 17) * 0.3;
  const std::vector<double> ref = UniformReference(k);
  for (auto _ : state) benchmark::DoNotOptimize(OptimalPolicy(r, ref, 0.5));
}
BENCHMARK(BM_OptimalPolicy)->Arg(10)->Arg(1000);

}  // namespace
}  // namespace sympref
