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

#ifndef SYMPREF_POLICY_H_
#define SYMPREF_POLICY_H_

#include <vector>

#include "sympref/losses.h"
#include "sympref/prefgen.h"
#include "sympref/riskcore.h"

namespace sympref {

// A distribution over the action space, its reference distribution and the
// KL temperature beta. Both distributions are strictly positive and sum to 1.
struct PolicyTable {
  std::vector<double> probs;
  std::vector<double> reference;
  double beta = 1.0;

  // Throws DomainError unless both vectors have equal length, are strictly
  // positive and sum to 1 within `tol`, and beta > 0.
  void Validate(double tol = 1e-12) const;
};

// Tabular policy pi = softmax(log pi_ref + theta).
struct PolicyParams {
  std::vector<double> theta;
};

// Normalizes a strictly positive vector; throws DomainError otherwise.
std::vector<double> Normalized(std::vector<double> weights);
std::vector<double> UniformReference(std::size_t n);

std::vector<double> PolicyProbs(const PolicyParams& params,
                                const std::vector<double>& reference);
// log pi(a) for every action, computed with a stable log-sum-exp.
std::vector<double> PolicyLogProbs(const PolicyParams& params,
                                   const std::vector<double>& reference);

// Closed-form maximizer of E_pi[r] - beta KL(pi, pi_ref):
// pi*(a) = pi_ref(a) exp(r(a) / beta) / Z.
PolicyTable OptimalPolicy(const std::vector<double>& reward,
                          const std::vector<double>& reference, double beta);
PolicyTable OptimalPolicy(const RewardModel& model, const ActionSpace& space,
                          const std::vector<double>& reference, double beta);

// Tabular reward beta * log(pi / pi_ref).
RewardModel ImplicitReward(const std::vector<double>& probs,
                           const std::vector<double>& reference, double beta);
RewardModel ImplicitReward(const PolicyTable& policy);

enum class ObjectiveMode {
  kSympo,     // the loss must be symmetric
  kBaseline,  // any loss (DPO family and friends)
};

// Mean (or exact-mass-weighted) l(y * beta * (log pi(a1)/pi_ref(a1) -
// log pi(a2)/pi_ref(a2))).
double SympoObjective(const PolicyParams& params, const PreferenceDataset& ds,
                      const LossSpec& loss, const std::vector<double>& reference,
                      double beta, LabelView view,
                      ObjectiveMode mode = ObjectiveMode::kSympo);

// Gradient of SympoObjective with respect to theta.
std::vector<double> SympoGradient(const PolicyParams& params,
                                  const PreferenceDataset& ds,
                                  const LossSpec& loss,
                                  const std::vector<double>& reference,
                                  double beta, LabelView view,
                                  ObjectiveMode mode = ObjectiveMode::kSympo);

struct PolicyTrainResult {
  PolicyTable policy;
  PolicyParams params;
  RiskTrace trace;
};

// Gradient descent on the noisy-label objective from theta = 0 (pi = pi_ref).
// cfg.epochs = 0 is allowed here and returns the reference policy.
// Symmetric losses run in SymPO mode, all others in baseline mode.
PolicyTrainResult TrainPolicyOffline(const PreferenceDataset& ds,
                                     const LossSpec& loss,
                                     const std::vector<double>& reference,
                                     double beta, const TrainConfig& cfg);

double ExpectedTrueReward(const std::vector<double>& probs,
                          const ActionSpace& space);
// E_pi[r_true] - E_ref[r_true].
double ImprovementMargin(const PolicyTable& policy, const ActionSpace& space);

}  // namespace sympref

#endif  // SYMPREF_POLICY_H_
