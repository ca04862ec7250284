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

#include "sympref/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "sympref/errors.h"

namespace sympref {
namespace {

int Sign(double x) { return x >= 0.0 ? 1 : -1; }

constexpr double kBracket = 30.0;
constexpr int kGridPoints = 601;
constexpr double kTieTol = 1e-14;

}  // namespace

double RewardAccuracy(const RewardModel& model, const PreferenceDataset& test) {
  if (test.empty()) throw DomainError("reward accuracy of an empty test set");
  const ActionSpace& space = test.space();
  const std::vector<double> r = model.Rewards(space);
  double hit = 0.0, total = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& rec = test.records()[i];
    const int predicted = Sign(r[rec.a1] - r[rec.a2]);
    const int truth = Sign(space.true_reward(rec.a1) - space.true_reward(rec.a2));
    const double w = test.weight(i);
    total += w;
    if (predicted == truth) hit += w;
  }
  return hit / total;
}

double RankPreservationRate(const RewardModel& model, const ActionSpace& space) {
  const std::vector<double> r = model.Rewards(space);
  std::size_t qualifying = 0, kept = 0;
  for (std::size_t a = 0; a < space.size(); ++a) {
    for (std::size_t b = 0; b < space.size(); ++b) {
      if (space.true_reward(a) > space.true_reward(b)) {
        ++qualifying;
        if (r[a] > r[b]) ++kept;
      }
    }
  }
  if (qualifying == 0) {
    throw DomainError(
        "rank preservation undefined: all true rewards are equal, so no "
        "policy can improve on the reference");
  }
  return static_cast<double>(kept) / static_cast<double>(qualifying);
}

double CpeRecoveryError(const RewardModel& model, const ActionSpace& space,
                        const LossSpec& loss) {
  const auto link = loss.cpe_link();
  if (!link) {
    throw DomainError("loss " + loss.ToString() + " has no CPE link");
  }
  const std::vector<double> r = model.Rewards(space);
  double worst = 0.0;
  for (std::size_t a = 0; a < space.size(); ++a) {
    for (std::size_t b = 0; b < space.size(); ++b) {
      if (a == b) continue;
      const double eta = Sigmoid(space.true_reward(a) - space.true_reward(b));
      worst = std::max(worst, std::abs(link->Inverse(r[a] - r[b]) - eta));
    }
  }
  return worst;
}

double ConditionalRisk(const LossSpec& loss, double eta, double alpha) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
  return eta * LossValue(loss, alpha) + (1.0 - eta) * LossValue(loss, -alpha);
}

ConditionalOptimum OptimalConditionalRisk(const LossSpec& loss, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
  if (!loss.bounded_below()) {
    throw DomainError("conditional risk of " + loss.ToString() +
                      " is unbounded below");
  }
  auto c = [&](double a) { return ConditionalRisk(loss, eta, a); };
  auto grid = [](int i) {
    return -kBracket + 2.0 * kBracket * i / (kGridPoints - 1);
  };
  int best = 0;
  double best_v = c(grid(0));
  for (int i = 1; i < kGridPoints; ++i) {
    const double v = c(grid(i));
    if (v < best_v) {
      best = i;
      best_v = v;
    }
  }
  double lo = grid(std::max(best - 1, 0));
  double hi = grid(std::min(best + 1, kGridPoints - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = c(x1), f2 = c(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = c(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = c(x2);
    }
  }
  // The grid point itself wins unless the refinement strictly improves on it.
  ConditionalOptimum out{best_v, grid(best), false};
  const double mid = 0.5 * (lo + hi);
  const double mid_v = c(mid);
  if (mid_v < best_v) {
    out.value = mid_v;
    out.argmin = mid;
  }
  out.at_boundary = std::abs(std::abs(out.argmin) - kBracket) < 1e-9;
  return out;
}

int CalibrationSign(const LossSpec& loss, double eta) {
  return Sign(OptimalConditionalRisk(loss, eta).argmin);
}

RewardModel BruteForceRiskMinimizer(const ActionSpace& space,
                                    const LossSpec& loss,
                                    const PreferenceDataset& exact_ds,
                                    const OracleOptions& options) {
  const std::size_t n = space.size();
  if (n > options.max_actions) {
    throw DomainError("brute-force oracle refuses " + std::to_string(n) +
                      " actions (limit " + std::to_string(options.max_actions) + ")");
  }
  if (!exact_ds.exact()) throw DomainError("brute-force oracle needs an exact dataset");
  if (!(exact_ds.space() == space)) {
    throw DomainError("dataset does not belong to the given action space");
  }
  if (!loss.bounded_below()) {
    throw DomainError("risk of " + loss.ToString() + " has no minimizer");
  }
  if (!(options.step > 0.0) || !(options.hi > options.lo)) {
    throw ConfigError("oracle grid needs lo < hi and a positive step");
  }

  // Risk = sum over a < b of A_ab l(r_a - r_b) + B_ab l(r_b - r_a).
  std::vector<double> coef_a(n * n, 0.0), coef_b(n * n, 0.0);
  for (std::size_t i = 0; i < exact_ds.size(); ++i) {
    const auto& rec = exact_ds.records()[i];
    const int y = options.view == LabelView::kClean ? rec.clean_label : rec.noisy_label;
    const double w = exact_ds.weight(i);
    std::size_t a = rec.a1, b = rec.a2;
    bool forward = y > 0;
    if (a > b) {
      std::swap(a, b);
      forward = !forward;
    }
    (forward ? coef_a : coef_b)[a * n + b] += w;
  }
  struct Pair {
    std::size_t a, b;
    double ca, cb;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double ca = coef_a[a * n + b], cb = coef_b[a * n + b];
      if (ca != 0.0 || cb != 0.0) pairs.push_back({a, b, ca, cb});
    }
  }

  const long steps = std::lround((options.hi - options.lo) / options.step);
  const long points = steps + 1;
  auto value_at = [&](long k) { return options.lo + options.step * static_cast<double>(k); };
  // Index 0 is pinned at the grid point nearest zero.
  long zero_index = std::lround(-options.lo / options.step);
  zero_index = std::clamp(zero_index, 0L, steps);

  // l(d) for every difference of grid indices, d in [-steps, steps].
  std::vector<double> table(2 * steps + 1);
  for (long d = -steps; d <= steps; ++d) {
    table[d + steps] = LossValue(loss, options.step * static_cast<double>(d));
  }

  std::vector<long> idx(n, zero_index), best_idx(n, zero_index);
  double best_v = INFINITY;
  std::function<void(std::size_t)> search = [&](std::size_t pos) {
    if (pos == n) {
      double v = 0.0;
      for (const Pair& p : pairs) {
        const long d = idx[p.a] - idx[p.b];
        v += p.ca * table[d + steps] + p.cb * table[-d + steps];
      }
      if (v < best_v - kTieTol) {
        best_v = v;
        best_idx = idx;
      }
      return;
    }
    for (long k = 0; k < points; ++k) {
      idx[pos] = k;
      search(pos + 1);
    }
  };
  search(1);

  std::vector<double> r(n);
  for (std::size_t a = 0; a < n; ++a) r[a] = value_at(best_idx[a]);
  r[0] = value_at(zero_index);
  auto risk = [&](const std::vector<double>& x) {
    double v = 0.0;
    for (const Pair& p : pairs) {
      const double d = x[p.a] - x[p.b];
      v += p.ca * LossValue(loss, d) + p.cb * LossValue(loss, -d);
    }
    return v;
  };
  double current = risk(r);
  for (double h = options.step / 2.0; h >= options.refine_tol; h /= 2.0) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t a = 1; a < n; ++a) {
        for (double dir : {1.0, -1.0}) {
          const double candidate = r[a] + dir * h;
          if (candidate < options.lo || candidate > options.hi) continue;
          const double saved = r[a];
          r[a] = candidate;
          const double v = risk(r);
          if (v < current - kTieTol) {
            current = v;
            improved = true;
          } else {
            r[a] = saved;
          }
        }
      }
    }
  }
  return RewardModel::Tabular(std::move(r));
}

}  // namespace sympref
