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

#ifndef SYMPREF_PROBES_H_
#define SYMPREF_PROBES_H_

#include <cstdint>
#include <string>
#include <vector>

namespace sympref {

// Executable checks of the library's headline properties. Each probe draws
// its random instances from Stream::kInstances of the given seed.
struct ProbeResult {
  int id = 0;
  std::string name;
  bool criterion_met = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  bool within_budget() const { return seconds < budget_seconds; }
  bool passed() const { return criterion_met && within_budget(); }
};

struct ProbeOptions {
  std::uint64_t seed = 20261019;
  int jobs = 1;  // used by the sweep probe only
};

inline constexpr int kProbeCount = 8;

// 1: flip invariance (exact triples and the Gaussian Monte-Carlo curves)
ProbeResult ProbeFlipInvariance(const ProbeOptions& options = {});
// 2: affine noisy-risk identity for symmetric losses and order preservation
ProbeResult ProbeAffineIdentity(const ProbeOptions& options = {});
// 3: policy improvement of the optimal policy under rank-preserving rewards
ProbeResult ProbePolicyImprovement(const ProbeOptions& options = {});
// 4: brute-force risk minimizers of calibrated losses preserve rank
ProbeResult ProbeOracleRank(const ProbeOptions& options = {});
// 5: logistic recovers BT posteriors; sigmoid/ramp keep rank but not gaps
ProbeResult ProbeCpeSeparation(const ProbeOptions& options = {});
// 6: digit-reward noise sweep, symmetric vs convex losses at high noise
ProbeResult ProbeRobustnessOrdering(const ProbeOptions& options = {});
// 7: offline sigmoid vs logistic policies under heavy asymmetric noise
ProbeResult ProbeOfflineRobustness(const ProbeOptions& options = {});
// 8: analytic gradients vs central differences; policy normalization
ProbeResult ProbeNumericalHygiene(const ProbeOptions& options = {});

ProbeResult RunProbe(int id, const ProbeOptions& options = {});
std::vector<ProbeResult> RunProbes(const std::vector<int>& ids, const ProbeOptions& options = {});

// "[PASS] 3 policy improvement (0.41s / 5s): detail"
std::string FormatProbeLine(const ProbeResult& result);

}  // namespace sympref

#endif  // SYMPREF_PROBES_H_
