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

#include "sympref/riskcore.h"

#include <algorithm>
#include <cmath>

#include "sympref/errors.h"

namespace sympref {
namespace {

int Label(const PreferenceRecord& r, LabelView view) {
  return view == LabelView::kClean ? r.clean_label : r.noisy_label;
}

// d effective / d raw.
double ClipSlope(const RewardModel& m, double raw) {
  if (!m.clip) return 1.0;
  return std::abs(raw) > *m.clip ? 0.0 : 1.0;
}

void CheckRiskInputs(const RewardModel& model, const PreferenceDataset& ds) {
  if (ds.empty()) throw DomainError("risk of an empty dataset is undefined");
  model.CheckCompatible(ds.space());
}

}  // namespace

void RewardModel::CheckCompatible(const ActionSpace& space) const {
  if (kind == ModelKind::kTabular) {
    if (params.size() != space.size()) {
      throw DomainError("tabular model has " + std::to_string(params.size()) +
                        " entries for " + std::to_string(space.size()) +
                        " actions");
    }
  } else {
    if (!space.has_features()) {
      throw DomainError("linear model needs action features");
    }
    if (params.size() != space.feature_dim()) {
      throw DomainError("linear model dimension differs from feature dimension");
    }
  }
  if (clip && !(*clip > 0.0)) throw DomainError("clip bound must be positive");
}

double RewardModel::Raw(const ActionSpace& space, std::size_t a) const {
  if (kind == ModelKind::kTabular) return params[a];
  const auto& x = space.features(a);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += params[k] * x[k];
  return s;
}

double RewardModel::Reward(const ActionSpace& space, std::size_t a) const {
  const double raw = Raw(space, a);
  return clip ? std::clamp(raw, -*clip, *clip) : raw;
}

std::vector<double> RewardModel::Rewards(const ActionSpace& space) const {
  CheckCompatible(space);
  std::vector<double> r(space.size());
  for (std::size_t a = 0; a < space.size(); ++a) r[a] = Reward(space, a);
  return r;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (clip && !(*clip > 0.0)) throw ConfigError("clip must be positive");
  if (init && init->kind == InitSpec::Kind::kGaussian && !(init->sigma >= 0.0)) {
    throw ConfigError("init sigma must be non-negative");
  }
}

double EmpiricalRisk(const RewardModel& model, const PreferenceDataset& ds,
                     const LossSpec& loss, LabelView view) {
  CheckRiskInputs(model, ds);
  const std::vector<double> r = model.Rewards(ds.space());
  double risk = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = ds.records()[i];
    const double z = Label(rec, view) * (r[rec.a1] - r[rec.a2]);
    risk += ds.raw_weight(i) * LossValue(loss, z);
  }
  return risk / ds.total_weight();
}

std::vector<double> RiskGradient(const RewardModel& model,
                                 const PreferenceDataset& ds,
                                 const LossSpec& loss, LabelView view) {
  CheckRiskInputs(model, ds);
  const ActionSpace& space = ds.space();
  std::vector<double> raw(space.size()), slope(space.size()), r(space.size());
  for (std::size_t a = 0; a < space.size(); ++a) {
    raw[a] = model.Raw(space, a);
    slope[a] = ClipSlope(model, raw[a]);
    r[a] = model.Reward(space, a);
  }
  // Accumulate d risk / d r(a) first, then chain through the parameterization.
  std::vector<double> d_reward(space.size(), 0.0);
  const double total = ds.total_weight();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = ds.records()[i];
    const int y = Label(rec, view);
    const double z = y * (r[rec.a1] - r[rec.a2]);
    const double c = ds.raw_weight(i) * LossGrad(loss, z) * y / total;
    d_reward[rec.a1] += c;
    d_reward[rec.a2] -= c;
  }
  std::vector<double> grad(model.params.size(), 0.0);
  if (model.kind == ModelKind::kTabular) {
    for (std::size_t a = 0; a < space.size(); ++a) grad[a] = d_reward[a] * slope[a];
  } else {
    for (std::size_t a = 0; a < space.size(); ++a) {
      const double c = d_reward[a] * slope[a];
      if (c == 0.0) continue;
      const auto& x = space.features(a);
      for (std::size_t k = 0; k < x.size(); ++k) grad[k] += c * x[k];
    }
  }
  return grad;
}

double L2Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

TrainResult TrainReward(const PreferenceDataset& ds, const TrainConfig& cfg) {
  cfg.Validate();
  if (ds.empty()) throw DomainError("cannot train on an empty dataset");
  if ((cfg.mode == RiskMode::kExact) != ds.exact()) {
    throw ConfigError(cfg.mode == RiskMode::kExact
                          ? "exact mode requested but the dataset holds samples"
                          : "empirical mode requested but the dataset is exact");
  }
  const ActionSpace& space = ds.space();
  RewardModel model;
  model.kind = cfg.model_kind;
  model.clip = cfg.clip;
  const std::size_t dim =
      cfg.model_kind == ModelKind::kTabular ? space.size() : space.feature_dim();
  if (cfg.model_kind == ModelKind::kLinear && !space.has_features()) {
    throw ConfigError("linear model requested but the space has no features");
  }
  const InitSpec init =
      cfg.init.value_or(cfg.model_kind == ModelKind::kTabular
                            ? InitSpec{InitSpec::Kind::kZeros, 0.0}
                            : InitSpec{InitSpec::Kind::kGaussian, 0.01});
  model.params.assign(dim, 0.0);
  if (init.kind == InitSpec::Kind::kGaussian) {
    Rng rng(cfg.seed, Stream::kInit);
    for (double& p : model.params) p = init.sigma * rng.Normal();
  }

  TrainResult result{model, {}};
  RiskTrace& trace = result.trace;
  trace.noisy_risk.reserve(cfg.epochs + 1);
  trace.clean_risk.reserve(cfg.epochs + 1);
  trace.grad_norm.reserve(cfg.epochs + 1);

  RewardModel& m = result.model;
  for (int epoch = 0; epoch <= cfg.epochs; ++epoch) {
    const double noisy = EmpiricalRisk(m, ds, cfg.loss, LabelView::kNoisy);
    const double clean = EmpiricalRisk(m, ds, cfg.loss, LabelView::kClean);
    const std::vector<double> grad = RiskGradient(m, ds, cfg.loss, LabelView::kNoisy);
    const double gnorm = L2Norm(grad);
    if (!std::isfinite(noisy) || !std::isfinite(gnorm)) {
      throw TrainingError("reward training diverged: risk is not finite", epoch);
    }
    if (epoch == 0 && cfg.loss.kind() == LossKind::kUnhinged &&
        !cfg.loss.correction_eps() && !m.clip && gnorm > 0.0) {
      throw TrainingError(
          "reward training diverges: unhinged risk is linear with nonzero "
          "gradient, hence unbounded below; set a clip bound",
          epoch);
    }
    trace.noisy_risk.push_back(noisy);
    trace.clean_risk.push_back(clean);
    trace.grad_norm.push_back(gnorm);
    if (epoch == cfg.epochs) break;
    for (std::size_t k = 0; k < m.params.size(); ++k) {
      m.params[k] -= cfg.learning_rate * grad[k];
    }
    for (double p : m.params) {
      if (!std::isfinite(p)) {
        throw TrainingError("reward training diverged: parameters are not finite",
                            epoch + 1);
      }
    }
  }
  return result;
}

AffineCheck ExactRiskAffineCheck(const RewardModel& model,
                                 const PreferenceDataset& clean_exact,
                                 const NoiseSpec& noise, const LossSpec& loss) {
  if (!clean_exact.exact()) {
    throw DomainError("affine check needs an exact-mode dataset");
  }
  const auto k = loss.symmetry_constant();
  if (!k) {
    throw DomainError("affine check needs a symmetric loss; " + loss.ToString() +
                      " has no symmetry constant");
  }
  const double prior = clean_exact.ClassPrior();
  noise.Validate(prior);
  Rng unused(0, Stream::kNoise);
  const PreferenceDataset noisy = InjectNoise(clean_exact, noise, unused);
  AffineCheck out;
  out.lhs = EmpiricalRisk(model, noisy, loss, LabelView::kNoisy);
  out.clean_risk = EmpiricalRisk(model, clean_exact, loss, LabelView::kClean);
  out.effective_rate = noise.EffectiveRate(prior);
  out.rhs = (1.0 - 2.0 * out.effective_rate) * out.clean_risk +
            out.effective_rate * *k;
  return out;
}

}  // namespace sympref
