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

#ifndef SYMPREF_LOSSES_H_
#define SYMPREF_LOSSES_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sympref {

// Margin losses l(z) where z = y * score. The last three are the DPO-family
// composites; for those z stands for beta * logit.
enum class LossKind {
  kLogistic,
  kHinge,
  kSquared,
  kExponential,
  kSigmoid,
  kUnhinged,
  kRamp,
  kCdpo,
  kRdpo,
  kRopo,
};

// Invertible map between the class posterior eta and the risk-minimizing
// score of a class-probability-estimation loss.
struct CpeLink {
  LossKind kind;
  double Forward(double eta) const;  // eta -> score
  double Inverse(double score) const;  // score -> eta
  friend bool operator==(const CpeLink&, const CpeLink&) = default;
};

// A named loss plus its parameters and its analytic metadata (symmetry
// constant, convexity, CPE link). Construct with MakeLoss(), ParseLoss() or
// NoiseCorrected(); the metadata is fixed per kind, never estimated
// numerically.
class LossSpec {
 public:
  LossKind kind() const { return kind_; }
  // Parameter of cdpo/rdpo (label-noise rate).
  std::optional<double> eps() const { return eps_; }
  // Parameter of ropo.
  std::optional<double> alpha() const { return alpha_; }
  // cdpo only: exchange eps and 1 - eps in the printed formula.
  bool cdpo_swapped() const { return cdpo_swapped_; }
  // Set when this spec is the noise-corrected transform of its base loss.
  std::optional<double> correction_eps() const { return correction_eps_; }

  // K in l(z) + l(-z) = K, when the loss is symmetric.
  std::optional<double> symmetry_constant() const { return symmetry_constant_; }
  bool is_symmetric() const { return symmetry_constant_.has_value(); }
  bool is_convex() const { return is_convex_; }
  bool is_cpe() const { return cpe_link_.has_value(); }
  std::optional<CpeLink> cpe_link() const { return cpe_link_; }
  // False when inf_z l(z) = -infinity (unhinged, noise-corrected losses).
  bool bounded_below() const { return bounded_below_; }

  // Canonical text form accepted by ParseLoss(), e.g. "rdpo:eps=0.2".
  std::string ToString() const;
  // Bare kind name, e.g. "rdpo".
  std::string name() const;

  friend bool operator==(const LossSpec&, const LossSpec&) = default;

 private:
  friend LossSpec MakeLoss(LossKind, std::optional<double>,
                           std::optional<double>, bool);
  friend LossSpec NoiseCorrected(const LossSpec&, double);

  LossKind kind_ = LossKind::kLogistic;
  std::optional<double> eps_;
  std::optional<double> alpha_;
  bool cdpo_swapped_ = false;
  std::optional<double> correction_eps_;
  std::optional<double> symmetry_constant_;
  bool is_convex_ = false;
  std::optional<CpeLink> cpe_link_;
  bool bounded_below_ = true;
};

// Throws ConfigError when a required parameter is missing (eps for
// cdpo/rdpo, alpha for ropo) and DomainError when it is out of range
// (rdpo eps in [0, 0.5), cdpo eps in [0, 1], ropo alpha > 0).
LossSpec MakeLoss(LossKind kind, std::optional<double> eps = std::nullopt,
                  std::optional<double> alpha = std::nullopt,
                  bool cdpo_swapped = false);

// Parses "name[:key=value[,key=value...]]". Keys: eps, alpha, swapped (0/1),
// nc (noise-correction rate, applied last). Examples: "sigmoid",
// "rdpo:eps=0.2", "ropo:alpha=14", "logistic:nc=0.3".
LossSpec ParseLoss(std::string_view text);

std::optional<LossKind> LossKindFromName(std::string_view name);
std::string_view LossKindName(LossKind kind);

// The seven pointwise losses: logistic, hinge, squared, exponential, sigmoid,
// unhinged, ramp.
std::vector<LossSpec> TableLosses();

double LossValue(const LossSpec& spec, double z);
// Derivative of LossValue in z. At the hinge kink (z = 1) and the ramp kinks
// (z = +-1) the average of the one-sided slopes is returned.
double LossGrad(const LossSpec& spec, double z);

// max |l(z) + l(-z) - K| over the grid when K is declared; otherwise the max
// deviation of l(z) + l(-z) from its grid mean. grid must be nonempty.
double SymmetryResidual(const LossSpec& spec, std::span<const double> grid);

// l~(z) = ((1 - eps) l(z) - eps l(-z)) / (1 - 2 eps). eps in [0, 0.5).
// A corrected symmetric loss stays symmetric with the same K.
LossSpec NoiseCorrected(const LossSpec& base, double eps);

// Numerically stable log(1 + exp(x)) and logistic sigmoid.
double Softplus(double x);
double Sigmoid(double x);

}  // namespace sympref

#endif  // SYMPREF_LOSSES_H_
