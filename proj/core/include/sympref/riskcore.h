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

#ifndef SYMPREF_RISKCORE_H_
#define SYMPREF_RISKCORE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "sympref/losses.h"
#include "sympref/prefgen.h"

namespace sympref {

enum class ModelKind { kTabular, kLinear };

// r: A -> R, either one free value per action or r(a) = w . features(a).
// With `clip` set, the effective reward is clamp(r, -clip, clip).
struct RewardModel {
  ModelKind kind = ModelKind::kTabular;
  std::vector<double> params;
  std::optional<double> clip;

  static RewardModel Tabular(std::vector<double> table,
                             std::optional<double> clip = std::nullopt) {
    return {ModelKind::kTabular, std::move(table), clip};
  }
  static RewardModel Linear(std::vector<double> weights,
                            std::optional<double> clip = std::nullopt) {
    return {ModelKind::kLinear, std::move(weights), clip};
  }

  // Throws DomainError if the model does not fit the space.
  void CheckCompatible(const ActionSpace& space) const;
  double Raw(const ActionSpace& space, std::size_t a) const;
  double Reward(const ActionSpace& space, std::size_t a) const;
  // Effective rewards of every action.
  std::vector<double> Rewards(const ActionSpace& space) const;

  friend bool operator==(const RewardModel&, const RewardModel&) = default;
};

enum class RiskMode { kEmpirical, kExact };

struct InitSpec {
  enum class Kind { kZeros, kGaussian } kind = Kind::kZeros;
  double sigma = 0.01;
};

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 1000;
  LossSpec loss = MakeLoss(LossKind::kLogistic);
  std::uint64_t seed = 0;
  RiskMode mode = RiskMode::kEmpirical;
  // Defaults to zeros for tabular models and gaussian(0.01) for linear ones.
  std::optional<InitSpec> init;
  ModelKind model_kind = ModelKind::kTabular;
  std::optional<double> clip;

  // Throws ConfigError for lr <= 0 or epochs < 1.
  void Validate() const;
};

// Per-epoch audit of a training run; entry 0 is the initialization.
struct RiskTrace {
  std::vector<double> noisy_risk;
  std::vector<double> clean_risk;
  std::vector<double> grad_norm;

  std::size_t size() const { return noisy_risk.size(); }
};

// Weighted mean of l(y * (r(a1) - r(a2))) under the chosen label view.
// Throws DomainError for an empty dataset or an incompatible model.
double EmpiricalRisk(const RewardModel& model, const PreferenceDataset& ds,
                     const LossSpec& loss, LabelView view);

// Gradient of EmpiricalRisk with respect to model.params. Rewards clipped
// strictly outside [-clip, clip] contribute zero.
std::vector<double> RiskGradient(const RewardModel& model,
                                 const PreferenceDataset& ds,
                                 const LossSpec& loss, LabelView view);

struct TrainResult {
  RewardModel model;
  RiskTrace trace;
};

// Full-batch gradient descent on the noisy-label risk. Clean labels feed the
// trace only. Throws TrainingError when the risk stops being finite, or, for
// the unhinged loss without clipping, when the initial gradient is nonzero
// (the objective is linear and therefore unbounded below).
TrainResult TrainReward(const PreferenceDataset& ds, const TrainConfig& cfg);

struct AffineCheck {
  double lhs = 0.0;  // exact noisy risk
  double rhs = 0.0;  // (1 - 2 eps_bar) * clean risk + eps_bar * K
  double clean_risk = 0.0;
  double effective_rate = 0.0;
};

// For an exact-mode dataset with clean labels and a symmetric loss: applies
// `noise` analytically and compares the noisy risk with the affine
// prediction. eps_bar uses the dataset's true class prior. The identity is
// exact when the pair marginal is symmetric, p(a1, a2) = p(a2, a1).
AffineCheck ExactRiskAffineCheck(const RewardModel& model,
                                 const PreferenceDataset& clean_exact,
                                 const NoiseSpec& noise, const LossSpec& loss);

double L2Norm(const std::vector<double>& v);

}  // namespace sympref

#endif  // SYMPREF_RISKCORE_H_
