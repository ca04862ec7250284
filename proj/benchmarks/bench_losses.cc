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

#include <vector>

#include "sympref/losses.h"

namespace sympref {
namespace {

std::vector<double> Margins() {
  std::vector<double> z(1024);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = -8.0 + 16.0 * static_cast<double>(i) / 1023.0;
  return z;
}

void BM_LossValue(benchmark::State& state) {
  const LossSpec loss = TableLosses()[static_cast<std::size_t>(state.range(0))];
  const std::vector<double> z = Margins();
  for (auto _ : state) {
    double s = 0.0;
    for (double x : z) s += LossValue(loss, x);
    benchmark::DoNotOptimize(s);
  }
  state.SetLabel(loss.name());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(z.size()));
}
BENCHMARK(BM_LossValue)->DenseRange(0, 6);

void BM_LossGrad(benchmark::State& state) {
  const LossSpec loss = TableLosses()[static_cast<std::size_t>(state.range(0))];
  const std::vector<double> z = Margins();
  for (auto _ : state) {
    double s = 0.0;
    for (double x : z) s += LossGrad(loss, x);
    benchmark::DoNotOptimize(s);
  }
  state.SetLabel(loss.name());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(z.size()));
}
BENCHMARK(BM_LossGrad)->DenseRange(0, 6);

void BM_DpoFamily(benchmark::State& state) {
  const LossSpec losses[] = {ParseLoss("cdpo:eps=0.1"), ParseLoss("rdpo:eps=0.1"),
                             ParseLoss("ropo:alpha=14")};
  const LossSpec& loss = losses[state.range(0)];
  const std::vector<double> z = Margins();
  for (auto _ : state) {
    double s = 0.0;
    for (double x : z) s += LossValue(loss, x) + LossGrad(loss, x);
    benchmark::DoNotOptimize(s);
  }
  state.SetLabel(loss.ToString());
}
BENCHMARK(BM_DpoFamily)->DenseRange(0, 2);

}  // namespace
}  // namespace sympref
