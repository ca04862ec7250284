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

#include "sympref/losses.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "sympref/errors.h"

namespace sympref {
namespace {

constexpr double kExpClamp = 500.0;

double ClampedExp(double x) {
  return std::exp(std::clamp(x, -kExpClamp, kExpClamp));
}

// Value and slope of the base kinds, ignoring any noise correction.
double BaseValue(const LossSpec& s, double z) {
  switch (s.kind()) {
    case LossKind::kLogistic:
      return Softplus(-z);
    case LossKind::kHinge:
      return std::max(0.0, 1.0 - z);
    case LossKind::kSquared:
      return (z - 1.0) * (z - 1.0);
    case LossKind::kExponential:
      return ClampedExp(-z);
    case LossKind::kSigmoid:
      return Sigmoid(-z);
    case LossKind::kUnhinged:
      return 1.0 - z;
    case LossKind::kRamp:
      return std::max(0.0, std::min(1.0, 0.5 - 0.5 * z));
    case LossKind::kCdpo: {
      // -eps log sigma(z) - (1 - eps) log sigma(-z)
      const double e = s.cdpo_swapped() ? 1.0 - *s.eps() : *s.eps();
      return e * Softplus(-z) + (1.0 - e) * Softplus(z);
    }
    case LossKind::kRdpo: {
      const double e = *s.eps();
      return ((1.0 - e) * Softplus(-z) - e * Softplus(z)) / (1.0 - 2.0 * e);
    }
    case LossKind::kRopo: {
      const double a = *s.alpha();
      const double d = (1.0 + a) * (1.0 + a);
      return 4.0 * a / d * Softplus(-z) + 4.0 * a * a / d * Sigmoid(-z);
    }
  }
  return 0.0;
}

double BaseGrad(const LossSpec& s, double z) {
  switch (s.kind()) {
    case LossKind::kLogistic:
      return -Sigmoid(-z);
    case LossKind::kHinge:
      if (z < 1.0) return -1.0;
      if (z > 1.0) return 0.0;
      return -0.5;
    case LossKind::kSquared:
      return 2.0 * (z - 1.0);
    case LossKind::kExponential:
      if (-z > kExpClamp || -z < -kExpClamp) return 0.0;
      return -std::exp(-z);
    case LossKind::kSigmoid:
      return -Sigmoid(z) * Sigmoid(-z);
    case LossKind::kUnhinged:
      return -1.0;
    case LossKind::kRamp: {
      const double a = std::abs(z);
      if (a < 1.0) return -0.5;
      if (a > 1.0) return 0.0;
      return -0.25;
    }
    case LossKind::kCdpo: {
      const double e = s.cdpo_swapped() ? 1.0 - *s.eps() : *s.eps();
      return -e * Sigmoid(-z) + (1.0 - e) * Sigmoid(z);
    }
    case LossKind::kRdpo: {
      const double e = *s.eps();
      return (-(1.0 - e) * Sigmoid(-z) - e * Sigmoid(z)) / (1.0 - 2.0 * e);
    }
    case LossKind::kRopo: {
      const double a = *s.alpha();
      const double d = (1.0 + a) * (1.0 + a);
      return -4.0 * a / d * Sigmoid(-z) -
             4.0 * a * a / d * Sigmoid(z) * Sigmoid(-z);
    }
  }
  return 0.0;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char shortbuf[64];
    std::snprintf(shortbuf, sizeof(shortbuf), "%.*g", prec, v);
    if (std::strtod(shortbuf, nullptr) == v) return shortbuf;
  }
  return buf;
}

double ParseNumber(std::string_view key, std::string_view text) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError("loss parameter '" + std::string(key) +
                      "' is not a finite number: '" + s + "'");
  }
  return v;
}

}  // namespace

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double CpeLink::Forward(double eta) const {
  switch (kind) {
    case LossKind::kLogistic:
      return std::log(eta / (1.0 - eta));
    case LossKind::kSquared:
      return 2.0 * eta - 1.0;
    case LossKind::kExponential:
      return 0.5 * std::log(eta / (1.0 - eta));
    default:
      throw DomainError("no CPE link for loss " +
                        std::string(LossKindName(kind)));
  }
}

double CpeLink::Inverse(double score) const {
  switch (kind) {
    case LossKind::kLogistic:
      return Sigmoid(score);
    case LossKind::kSquared:
      return std::clamp(0.5 * (score + 1.0), 0.0, 1.0);
    case LossKind::kExponential:
      return Sigmoid(2.0 * score);
    default:
      throw DomainError("no CPE link for loss " +
                        std::string(LossKindName(kind)));
  }
}

std::string_view LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kLogistic: return "logistic";
    case LossKind::kHinge: return "hinge";
    case LossKind::kSquared: return "squared";
    case LossKind::kExponential: return "exponential";
    case LossKind::kSigmoid: return "sigmoid";
    case LossKind::kUnhinged: return "unhinged";
    case LossKind::kRamp: return "ramp";
    case LossKind::kCdpo: return "cdpo";
    case LossKind::kRdpo: return "rdpo";
    case LossKind::kRopo: return "ropo";
  }
  return "?";
}

std::optional<LossKind> LossKindFromName(std::string_view name) {
  for (LossKind k :
       {LossKind::kLogistic, LossKind::kHinge, LossKind::kSquared,
        LossKind::kExponential, LossKind::kSigmoid, LossKind::kUnhinged,
        LossKind::kRamp, LossKind::kCdpo, LossKind::kRdpo, LossKind::kRopo}) {
    if (LossKindName(k) == name) return k;
  }
  // DPO is the logistic loss applied to beta * logit.
  if (name == "dpo") return LossKind::kLogistic;
  return std::nullopt;
}

LossSpec MakeLoss(LossKind kind, std::optional<double> eps,
                  std::optional<double> alpha, bool cdpo_swapped) {
  LossSpec s;
  s.kind_ = kind;
  const std::string name(LossKindName(kind));
  switch (kind) {
    case LossKind::kCdpo:
      if (!eps) throw ConfigError("loss cdpo requires parameter eps");
      if (!(*eps >= 0.0 && *eps <= 1.0)) {
        throw DomainError("cdpo requires eps in [0, 1]");
      }
      s.eps_ = eps;
      s.cdpo_swapped_ = cdpo_swapped;
      break;
    case LossKind::kRdpo:
      if (!eps) throw ConfigError("loss rdpo requires parameter eps");
      if (!(*eps >= 0.0 && *eps < 0.5)) {
        throw DomainError("rdpo requires eps in [0, 0.5) (divides by 1 - 2 eps)");
      }
      s.eps_ = eps;
      break;
    case LossKind::kRopo:
      if (!alpha) throw ConfigError("loss ropo requires parameter alpha");
      if (!(*alpha > 0.0) || !std::isfinite(*alpha)) {
        throw DomainError("ropo requires alpha > 0");
      }
      s.alpha_ = alpha;
      break;
    default:
      if (eps || alpha) {
        throw ConfigError("loss " + name + " takes no parameters");
      }
      break;
  }
  if (cdpo_swapped && kind != LossKind::kCdpo) {
    throw ConfigError("'swapped' applies to cdpo only");
  }

  switch (kind) {
    case LossKind::kLogistic:
    case LossKind::kSquared:
    case LossKind::kExponential:
      s.is_convex_ = true;
      s.cpe_link_ = CpeLink{kind};
      break;
    case LossKind::kHinge:
    case LossKind::kCdpo:
    case LossKind::kRdpo:
      s.is_convex_ = true;
      break;
    case LossKind::kSigmoid:
    case LossKind::kRamp:
      s.symmetry_constant_ = 1.0;
      break;
    case LossKind::kUnhinged:
      s.is_convex_ = true;
      s.symmetry_constant_ = 2.0;
      s.bounded_below_ = false;
      break;
    case LossKind::kRopo:
      break;
  }
  // rdpo contains a -eps/(1-2eps) * log sigma(-z) term that is unbounded
  // below once eps > 0.
  if (kind == LossKind::kRdpo && *eps > 0.0) s.bounded_below_ = false;
  return s;
}

LossSpec NoiseCorrected(const LossSpec& base, double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) {
    throw DomainError("noise correction requires eps in [0, 0.5)");
  }
  if (base.correction_eps_) {
    throw ConfigError("loss is already noise-corrected");
  }
  LossSpec s = base;
  s.correction_eps_ = eps;
  // Convexity and the CPE link do not survive the transform in general; the
  // symmetry constant does.
  if (eps > 0.0) {
    s.is_convex_ = false;
    s.cpe_link_.reset();
    s.bounded_below_ = base.is_symmetric() ? base.bounded_below_ : false;
  }
  return s;
}

std::string LossSpec::name() const { return std::string(LossKindName(kind_)); }

std::string LossSpec::ToString() const {
  std::string out = name();
  std::vector<std::string> params;
  if (eps_) params.push_back("eps=" + FormatDouble(*eps_));
  if (alpha_) params.push_back("alpha=" + FormatDouble(*alpha_));
  if (cdpo_swapped_) params.push_back("swapped=1");
  if (correction_eps_) params.push_back("nc=" + FormatDouble(*correction_eps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    out += (i == 0 ? ":" : ",") + params[i];
  }
  return out;
}

LossSpec ParseLoss(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const auto kind = LossKindFromName(name);
  if (!kind) throw ConfigError("unknown loss '" + std::string(name) + "'");

  std::optional<double> eps, alpha, nc;
  bool swapped = false;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{}
                                             : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("malformed loss parameter '" + std::string(item) +
                          "' (expected key=value)");
      }
      const std::string_view key = item.substr(0, eq);
      const double v = ParseNumber(key, item.substr(eq + 1));
      if (key == "eps") {
        eps = v;
      } else if (key == "alpha") {
        alpha = v;
      } else if (key == "swapped") {
        swapped = v != 0.0;
      } else if (key == "nc") {
        nc = v;
      } else {
        throw ConfigError("unknown loss parameter '" + std::string(key) + "'");
      }
    }
  }
  LossSpec spec = MakeLoss(*kind, eps, alpha, swapped);
  if (nc) spec = NoiseCorrected(spec, *nc);
  return spec;
}

std::vector<LossSpec> TableLosses() {
  return {MakeLoss(LossKind::kLogistic),    MakeLoss(LossKind::kHinge),
          MakeLoss(LossKind::kSquared),     MakeLoss(LossKind::kExponential),
          MakeLoss(LossKind::kSigmoid),     MakeLoss(LossKind::kUnhinged),
          MakeLoss(LossKind::kRamp)};
}

double LossValue(const LossSpec& spec, double z) {
  if (!std::isfinite(z)) throw DomainError("loss margin must be finite");
  if (const auto e = spec.correction_eps()) {
    return ((1.0 - *e) * BaseValue(spec, z) - *e * BaseValue(spec, -z)) /
           (1.0 - 2.0 * *e);
  }
  return BaseValue(spec, z);
}

double LossGrad(const LossSpec& spec, double z) {
  if (!std::isfinite(z)) throw DomainError("loss margin must be finite");
  if (const auto e = spec.correction_eps()) {
    // d/dz l(-z) = -l'(-z)
    return ((1.0 - *e) * BaseGrad(spec, z) + *e * BaseGrad(spec, -z)) /
           (1.0 - 2.0 * *e);
  }
  return BaseGrad(spec, z);
}

double SymmetryResidual(const LossSpec& spec, std::span<const double> grid) {
  if (grid.empty()) return 0.0;
  std::vector<double> sums;
  sums.reserve(grid.size());
  for (double z : grid) sums.push_back(LossValue(spec, z) + LossValue(spec, -z));
  double target;
  if (const auto k = spec.symmetry_constant()) {
    target = *k;
  } else {
    double total = 0.0;
    for (double v : sums) total += v;
    target = total / static_cast<double>(sums.size());
  }
  double worst = 0.0;
  for (double v : sums) worst = std::max(worst, std::abs(v - target));
  return worst;
}

}  // namespace sympref
