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

#ifndef SYMPREF_DIAGNOSTICS_H_
#define SYMPREF_DIAGNOSTICS_H_

#include <cstdint>
#include <optional>
#include <string>

#include "sympref/losses.h"
#include "sympref/prefgen.h"
#include "sympref/riskcore.h"

namespace sympref {

struct DiagnosticsReport {
  double reward_accuracy = 0.0;
  double rank_preservation_rate = 0.0;
  std::optional<double> cpe_max_error;
  std::optional<double> improvement_margin;
  std::string loss;
  std::optional<NoiseSpec> noise;
  std::uint64_t seed = 0;
};

// Fraction of test records where sign(r(a1) - r(a2)) equals
// sign(r_true(a1) - r_true(a2)), with sign(0) = +1. Exact datasets are
// weighted by mass.
double RewardAccuracy(const RewardModel& model, const PreferenceDataset& test);

// Over ordered pairs with r_true(a1) > r_true(a2), the fraction with
// r(a1) > r(a2). Throws DomainError when all true rewards are equal.
double RankPreservationRate(const RewardModel& model, const ActionSpace& space);

// max over ordered pairs of |link^-1(r(a1) - r(a2)) - sigmoid(r_true(a1) -
// r_true(a2))|. Throws DomainError for losses without a CPE link.
double CpeRecoveryError(const RewardModel& model, const ActionSpace& space,
                        const LossSpec& loss);

// C_eta(alpha) = eta l(alpha) + (1 - eta) l(-alpha).
double ConditionalRisk(const LossSpec& loss, double eta, double alpha);

struct ConditionalOptimum {
  double value = 0.0;   // H_eta
  double argmin = 0.0;
  bool at_boundary = false;  // argmin sits on the bracket edge
};

// Minimizes C_eta over [-30, 30]: 601-point grid, then golden-section search
// to 1e-10 around the best grid point (lowest index wins ties). Throws
// DomainError for eta outside [0, 1] and for losses unbounded below.
ConditionalOptimum OptimalConditionalRisk(const LossSpec& loss, double eta);

// Sign (+1 / -1, sign(0) = +1) of the conditional-risk minimizer.
int CalibrationSign(const LossSpec& loss, double eta);

struct OracleOptions {
  double lo = -5.0;
  double hi = 5.0;
  double step = 0.1;
  std::size_t max_actions = 5;
  // Pattern-search refinement after the grid; the step halves down to this.
  double refine_tol = 1e-9;
  LabelView view = LabelView::kNoisy;
};

// Global grid search over tabular rewards with action 0 pinned to 0, then a
// coordinate pattern search inside the box. Ties go to the lowest
// lexicographic grid index. Throws DomainError for spaces larger than
// options.max_actions, non-exact datasets and losses unbounded below.
RewardModel BruteForceRiskMinimizer(const ActionSpace& space,
                                    const LossSpec& loss,
                                    const PreferenceDataset& exact_ds,
                                    const OracleOptions& options = {});

}  // namespace sympref

#endif  // SYMPREF_DIAGNOSTICS_H_
