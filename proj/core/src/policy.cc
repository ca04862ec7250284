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

#include "sympref/policy.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sympref/errors.h"

namespace sympref {
namespace {

void CheckReference(const std::vector<double>& reference, std::size_t n) {
  if (reference.size() != n) {
    throw DomainError("reference policy has " + std::to_string(reference.size()) +
                      " entries for " + std::to_string(n) + " actions");
  }
  for (double p : reference) {
    if (!(p > 0.0)) throw DomainError("reference policy must be strictly positive");
  }
}

void CheckMode(const LossSpec& loss, ObjectiveMode mode) {
  if (mode == ObjectiveMode::kSympo && !loss.is_symmetric()) {
    throw DomainError("SymPO objective needs a symmetric loss; got " +
                      loss.ToString());
  }
}

int Label(const PreferenceRecord& r, LabelView view) {
  return view == LabelView::kClean ? r.clean_label : r.noisy_label;
}

// beta * log(pi / pi_ref) per action.
std::vector<double> ImplicitMargins(const PolicyParams& params,
                                    const std::vector<double>& reference,
                                    double beta) {
  const std::vector<double> logp = PolicyLogProbs(params, reference);
  std::vector<double> out(logp.size());
  for (std::size_t a = 0; a < logp.size(); ++a) {
    out[a] = beta * (logp[a] - std::log(reference[a]));
  }
  return out;
}

}  // namespace

void PolicyTable::Validate(double tol) const {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (probs.size() != reference.size() || probs.empty()) {
    throw DomainError("policy and reference must have the same nonzero length");
  }
  double sp = 0.0, sr = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (!(probs[a] > 0.0) || !(reference[a] > 0.0)) {
      throw DomainError("policy and reference must be strictly positive");
    }
    sp += probs[a];
    sr += reference[a];
  }
  if (std::abs(sp - 1.0) > tol || std::abs(sr - 1.0) > tol) {
    throw DomainError("policy and reference must sum to 1");
  }
}

std::vector<double> Normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DomainError("weights must be finite and strictly positive");
    }
    total += w;
  }
  for (double& w : weights) w /= total;
  return weights;
}

std::vector<double> UniformReference(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::vector<double> PolicyLogProbs(const PolicyParams& params,
                                   const std::vector<double>& reference) {
  CheckReference(reference, params.theta.size());
  std::vector<double> logits(reference.size());
  double top = -INFINITY;
  for (std::size_t a = 0; a < reference.size(); ++a) {
    logits[a] = std::log(reference[a]) + params.theta[a];
    top = std::max(top, logits[a]);
  }
  double z = 0.0;
  for (double l : logits) z += std::exp(l - top);
  const double log_z = top + std::log(z);
  for (double& l : logits) l -= log_z;
  return logits;
}

std::vector<double> PolicyProbs(const PolicyParams& params,
                                const std::vector<double>& reference) {
  std::vector<double> p = PolicyLogProbs(params, reference);
  double total = 0.0;
  for (double& x : p) {
    // Underflow would break strict positivity; the floor is far below 1e-12.
    x = std::max(std::exp(x), std::numeric_limits<double>::min());
    total += x;
  }
  // One renormalization pass pins the sum to 1 at machine precision.
  for (double& x : p) x /= total;
  return p;
}

PolicyTable OptimalPolicy(const std::vector<double>& reward,
                          const std::vector<double>& reference, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  CheckReference(reference, reward.size());
  PolicyParams params{std::vector<double>(reward.size())};
  for (std::size_t a = 0; a < reward.size(); ++a) {
    params.theta[a] = reward[a] / beta;
  }
  return {PolicyProbs(params, reference), reference, beta};
}

PolicyTable OptimalPolicy(const RewardModel& model, const ActionSpace& space,
                          const std::vector<double>& reference, double beta) {
  return OptimalPolicy(model.Rewards(space), reference, beta);
}

RewardModel ImplicitReward(const std::vector<double>& probs,
                           const std::vector<double>& reference, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  CheckReference(reference, probs.size());
  std::vector<double> table(probs.size());
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (!(probs[a] > 0.0)) {
      throw DomainError("implicit reward undefined: policy assigns zero probability");
    }
    table[a] = beta * std::log(probs[a] / reference[a]);
  }
  return RewardModel::Tabular(std::move(table));
}

RewardModel ImplicitReward(const PolicyTable& policy) {
  return ImplicitReward(policy.probs, policy.reference, policy.beta);
}

double SympoObjective(const PolicyParams& params, const PreferenceDataset& ds,
                      const LossSpec& loss, const std::vector<double>& reference,
                      double beta, LabelView view, ObjectiveMode mode) {
  CheckMode(loss, mode);
  if (ds.empty()) throw DomainError("objective of an empty dataset is undefined");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (params.theta.size() != ds.space().size()) {
    throw DomainError("policy parameters do not match the action space");
  }
  const std::vector<double> m = ImplicitMargins(params, reference, beta);
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = ds.records()[i];
    total += ds.raw_weight(i) *
             LossValue(loss, Label(rec, view) * (m[rec.a1] - m[rec.a2]));
  }
  return total / ds.total_weight();
}

std::vector<double> SympoGradient(const PolicyParams& params,
                                  const PreferenceDataset& ds,
                                  const LossSpec& loss,
                                  const std::vector<double>& reference,
                                  double beta, LabelView view,
                                  ObjectiveMode mode) {
  CheckMode(loss, mode);
  if (ds.empty()) throw DomainError("objective of an empty dataset is undefined");
  if (params.theta.size() != ds.space().size()) {
    throw DomainError("policy parameters do not match the action space");
  }
  const std::size_t n = ds.space().size();
  const std::vector<double> m = ImplicitMargins(params, reference, beta);
  const std::vector<double> probs = PolicyProbs(params, reference);
  // d objective / d log pi(a)
  std::vector<double> d_logp(n, 0.0);
  const double weight_total = ds.total_weight();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = ds.records()[i];
    const int y = Label(rec, view);
    const double c =
        ds.raw_weight(i) * LossGrad(loss, y * (m[rec.a1] - m[rec.a2])) * y * beta /
        weight_total;
    d_logp[rec.a1] += c;
    d_logp[rec.a2] -= c;
  }
  // d log pi(a) / d theta(b) = [a == b] - pi(b)
  double total = 0.0;
  for (double g : d_logp) total += g;
  std::vector<double> grad(n);
  for (std::size_t b = 0; b < n; ++b) grad[b] = d_logp[b] - probs[b] * total;
  return grad;
}

PolicyTrainResult TrainPolicyOffline(const PreferenceDataset& ds,
                                     const LossSpec& loss,
                                     const std::vector<double>& reference,
                                     double beta, const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (cfg.epochs < 0) throw ConfigError("epochs must be non-negative");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (ds.empty()) throw DomainError("cannot train on an empty dataset");
  const std::size_t n = ds.space().size();
  CheckReference(reference, n);
  const ObjectiveMode mode =
      loss.is_symmetric() ? ObjectiveMode::kSympo : ObjectiveMode::kBaseline;

  PolicyTrainResult out;
  out.params.theta.assign(n, 0.0);
  auto& theta = out.params.theta;
  for (int epoch = 0; epoch <= cfg.epochs; ++epoch) {
    const double noisy =
        SympoObjective(out.params, ds, loss, reference, beta, LabelView::kNoisy, mode);
    const double clean =
        SympoObjective(out.params, ds, loss, reference, beta, LabelView::kClean, mode);
    const std::vector<double> grad =
        SympoGradient(out.params, ds, loss, reference, beta, LabelView::kNoisy, mode);
    const double gnorm = L2Norm(grad);
    if (!std::isfinite(noisy) || !std::isfinite(gnorm)) {
      throw TrainingError("policy training diverged: objective is not finite", epoch);
    }
    out.trace.noisy_risk.push_back(noisy);
    out.trace.clean_risk.push_back(clean);
    out.trace.grad_norm.push_back(gnorm);
    if (epoch == cfg.epochs) break;
    for (std::size_t a = 0; a < n; ++a) theta[a] -= cfg.learning_rate * grad[a];
  }
  out.policy = {PolicyProbs(out.params, reference), reference, beta};
  return out;
}

double ExpectedTrueReward(const std::vector<double>& probs,
                          const ActionSpace& space) {
  if (probs.size() != space.size()) {
    throw DomainError("policy and action space differ in size");
  }
  double e = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) e += probs[a] * space.true_reward(a);
  return e;
}

double ImprovementMargin(const PolicyTable& policy, const ActionSpace& space) {
  if (policy.reference.size() != space.size()) {
    throw DomainError("reference policy and action space differ in size");
  }
  return ExpectedTrueReward(policy.probs, space) -
         ExpectedTrueReward(policy.reference, space);
}

}  // namespace sympref
