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

#include "sympref/probes.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "sympref/diagnostics.h"
#include "sympref/errors.h"
#include "sympref/experiment.h"
#include "sympref/losses.h"
#include "sympref/policy.h"
#include "sympref/prefgen.h"
#include "sympref/riskcore.h"

namespace sympref {
namespace {

using Clock = std::chrono::steady_clock;

// Substreams keep the probes independent of each other.
Rng InstanceRng(const ProbeOptions& o, int probe) {
  return Rng(o.seed, Stream::kInstances, static_cast<std::uint64_t>(probe));
}

std::vector<double> UniformRewards(Rng& rng, std::size_t k, double scale) {
  std::vector<double> r(k);
  for (auto& x : r) x = scale * rng.Uniform();
  return r;
}

std::vector<double> RandomTable(Rng& rng, std::size_t k, double sd) {
  std::vector<double> r(k);
  for (auto& x : r) x = sd * rng.Normal();
  return r;
}

// Row-major pair marginal with zero diagonal; symmetric if requested.
std::vector<double> RandomPairWeights(Rng& rng, std::size_t k, bool symmetric) {
  std::vector<double> w(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b || (symmetric && b < a)) continue;
      w[a * k + b] = 0.05 + rng.Uniform();
      if (symmetric) w[b * k + a] = w[a * k + b];
    }
  }
  return w;
}

std::vector<LossSpec> ProbeLosses() {
  std::vector<LossSpec> out = TableLosses();
  for (const char* s : {"cdpo:eps=0.2", "cdpo:eps=0.2,swapped=1", "rdpo:eps=0.2", "ropo:alpha=14",
                        "logistic:nc=0.3", "sigmoid:nc=0.2", "hinge:nc=0.1"}) {
    out.push_back(ParseLoss(s));
  }
  return out;
}

bool HasKinks(const LossSpec& loss) {
  return loss.kind() == LossKind::kHinge || loss.kind() == LossKind::kRamp;
}

// Hinge and ramp (and their corrected forms) are kinked at |z| = 1.
bool NearKink(const LossSpec& loss, double z, double tol) {
  return HasKinks(loss) && std::abs(std::abs(z) - 1.0) < tol;
}

double CentralDiff(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

bool GradClose(double analytic, double numeric, double tol = 1e-6) {
  return std::abs(analytic - numeric) <= tol * std::max(1.0, std::abs(numeric));
}

std::string Fmt(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, a);
  return buf;
}

template <typename F>
ProbeResult Timed(int id, const char* name, double budget, F&& body) {
  ProbeResult res;
  res.id = id;
  res.name = name;
  res.budget_seconds = budget;
  const auto t0 = Clock::now();
  try {
    body(res);
  } catch (const std::exception& e) {
    res.criterion_met = false;
    res.detail = std::string("error: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

}  // namespace

ProbeResult ProbeFlipInvariance(const ProbeOptions& o) {
  return Timed(1, "flip invariance", 10.0, [&](ProbeResult& res) {
    Rng rng = InstanceRng(o, 1);
    const std::vector<LossSpec> losses = ProbeLosses();
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const std::size_t k = 2 + rng.UniformInt(7);
      const SpacePtr space = MakeSpace(UniformRewards(rng, k, 3.0));
      const PreferenceDataset clean = MakeExactBt(space, RandomPairWeights(rng, k, false));
      const NoiseSpec noise = NoiseSpec::Asymmetric(0.45 * rng.Uniform(), 0.45 * rng.Uniform());
      const PreferenceDataset noisy = InjectNoise(clean, noise, rng);
      const RewardModel model = RewardModel::Tabular(RandomTable(rng, k, 2.0));
      const LossSpec& loss = losses[rng.UniformInt(losses.size())];
      std::vector<char> pick(k * k);
      for (auto& p : pick) p = rng.Bernoulli(0.5);
      const PreferenceDataset flipped =
          FlipSubset(noisy, [&](std::size_t a, std::size_t b) { return pick[a * k + b] != 0; });
      for (LabelView view : {LabelView::kClean, LabelView::kNoisy}) {
        worst = std::max(worst, std::abs(EmpiricalRisk(model, noisy, loss, view) -
                                         EmpiricalRisk(model, flipped, loss, view)));
      }
    }
    const double gap = MaxFig2Gap(RunFig2());
    res.criterion_met = worst < 1e-12 && gap < 0.01;
    res.detail = "exact max |pre-post| = " + Fmt("%.3g", worst) + " over 50 triples (< 1e-12); " +
                 "fig2 max curve gap = " + Fmt("%.3g", gap) + " at n=100000 (< 0.01)";
  });
}

ProbeResult ProbeAffineIdentity(const ProbeOptions& o) {
  return Timed(2, "affine noisy-risk identity", 10.0, [&](ProbeResult& res) {
    Rng rng = InstanceRng(o, 2);
    const std::vector<LossSpec> losses = {MakeLoss(LossKind::kSigmoid), MakeLoss(LossKind::kRamp),
                                          MakeLoss(LossKind::kUnhinged)};
    // Symmetric pair weights: the identity is exact only for those.
    auto instance = [&](std::size_t k) {
      const SpacePtr space = MakeSpace(UniformRewards(rng, k, 3.0));
      return MakeExactBt(space, RandomPairWeights(rng, k, true));
    };
    auto noise = [&] { return NoiseSpec::Asymmetric(0.49 * rng.Uniform(), 0.49 * rng.Uniform()); };
    double worst = 0.0;
    for (const LossSpec& loss : losses) {
      for (int t = 0; t < 20; ++t) {
        const std::size_t k = 2 + rng.UniformInt(5);
        const PreferenceDataset clean = instance(k);
        const AffineCheck c = ExactRiskAffineCheck(RewardModel::Tabular(RandomTable(rng, k, 2.0)),
                                                   clean, noise(), loss);
        worst = std::max(worst, std::abs(c.lhs - c.rhs));
      }
    }
    int kept = 0;
    for (int t = 0; t < 100; ++t) {
      const LossSpec& loss = losses[static_cast<std::size_t>(t) % losses.size()];
      const std::size_t k = 2 + rng.UniformInt(5);
      const PreferenceDataset clean = instance(k);
      const PreferenceDataset noisy = InjectNoise(clean, noise(), rng);
      const RewardModel r1 = RewardModel::Tabular(RandomTable(rng, k, 2.0));
      const RewardModel r2 = RewardModel::Tabular(RandomTable(rng, k, 2.0));
      const double dc = EmpiricalRisk(r1, clean, loss, LabelView::kClean) -
                        EmpiricalRisk(r2, clean, loss, LabelView::kClean);
      const double dn = EmpiricalRisk(r1, noisy, loss, LabelView::kNoisy) -
                        EmpiricalRisk(r2, noisy, loss, LabelView::kNoisy);
      if ((dc > 0) == (dn > 0) && (dc < 0) == (dn < 0)) ++kept;
    }
    res.criterion_met = worst < 1e-10 && kept == 100;
    res.detail = "max |lhs-rhs| = " + Fmt("%.3g", worst) + " over 60 settings (< 1e-10); order kept in " +
                 std::to_string(kept) + "/100 model pairs";
  });
}

ProbeResult ProbePolicyImprovement(const ProbeOptions& o) {
  return Timed(3, "policy improvement", 5.0, [&](ProbeResult& res) {
    Rng rng = InstanceRng(o, 3);
    const std::vector<std::function<double(double)>> transforms = {
        [](double x) { return 2.5 * x - 1.0; },
        [](double x) { return std::exp(x); },
        [](double x) { return x * x * x; },
        [](double x) { return 4.0 * std::tanh(x); },
        [](double x) { return Softplus(x); },
    };
    const double betas[] = {0.1, 1.0, 10.0};
    int improved[3] = {0, 0, 0};
    int rank_ok = 0;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t k = 2 + rng.UniformInt(9);
      const SpacePtr space = MakeSpace(RandomTable(rng, k, 1.5));
      std::vector<double> ref(k);
      for (auto& x : ref) x = 0.01 + rng.Uniform();
      ref = Normalized(ref);
      const auto& f = transforms[rng.UniformInt(transforms.size())];
      std::vector<double> r(k);
      for (std::size_t a = 0; a < k; ++a) r[a] = f(space->true_reward(a));
      if (RankPreservationRate(RewardModel::Tabular(r), *space) == 1.0) ++rank_ok;
      for (int b = 0; b < 3; ++b) {
        if (ImprovementMargin(OptimalPolicy(r, ref, betas[b]), *space) > 0.0) ++improved[b];
      }
    }
    res.criterion_met = rank_ok == 1000 && improved[0] == 1000 && improved[1] == 1000 &&
                        improved[2] == 1000;
    res.detail = "margin > 0 in " + std::to_string(improved[0]) + "/" + std::to_string(improved[1]) +
                 "/" + std::to_string(improved[2]) + " of 1000 at beta 0.1/1/10 (rank-preserving: " +
                 std::to_string(rank_ok) + "/1000)";
  });
}

ProbeResult ProbeOracleRank(const ProbeOptions& o) {
  return Timed(4, "oracle minimizers preserve rank", 60.0, [&](ProbeResult& res) {
    Rng rng = InstanceRng(o, 4);
    // Every calibrated table loss with an attainable infimum structure; unhinged
    // is unbounded below and has no minimizer.
    const std::vector<LossSpec> losses = {
        MakeLoss(LossKind::kLogistic), MakeLoss(LossKind::kHinge), MakeLoss(LossKind::kSquared),
        MakeLoss(LossKind::kExponential), MakeLoss(LossKind::kSigmoid), MakeLoss(LossKind::kRamp)};
    std::vector<int> full(losses.size(), 0);
    for (int t = 0; t < 50; ++t) {
      const std::size_t k = 2 + rng.UniformInt(3);
      const SpacePtr space = MakeSpace(UniformRewards(rng, k, 3.0));
      const PreferenceDataset ds = MakeExactBtUniform(space);
      for (std::size_t l = 0; l < losses.size(); ++l) {
        const RewardModel m = BruteForceRiskMinimizer(*space, losses[l], ds);
        if (RankPreservationRate(m, *space) == 1.0) ++full[l];
      }
    }
    res.criterion_met = std::all_of(full.begin(), full.end(), [](int c) { return c == 50; });
    res.detail = "rank rate 1.0 in";
    for (std::size_t l = 0; l < losses.size(); ++l) {
      res.detail += (l ? ", " : " ") + losses[l].name() + " " + std::to_string(full[l]) + "/50";
    }
  });
}

ProbeResult ProbeCpeSeparation(const ProbeOptions& o) {
  return Timed(5, "CPE separation", 30.0, [&](ProbeResult& res) {
    Rng rng = InstanceRng(o, 5);
    constexpr int kInstances = 5;
    double worst_cpe = 0.0;
    std::map<std::string, int> rank_full;
    std::map<std::string, double> widest_gap_error;
    for (int t = 0; t < kInstances; ++t) {
      const SpacePtr space = MakeSpace(UniformRewards(rng, 4, 3.0));
      const PreferenceDataset ds = MakeExactBtUniform(space);
      TrainConfig tc;
      tc.mode = RiskMode::kExact;
      tc.learning_rate = 4.0;
      tc.epochs = 4000;
      tc.loss = MakeLoss(LossKind::kLogistic);
      const RewardModel logi = TrainReward(ds, tc).model;
      worst_cpe = std::max(worst_cpe, CpeRecoveryError(logi, *space, tc.loss));
      for (LossKind kind : {LossKind::kSigmoid, LossKind::kRamp}) {
        tc.loss = MakeLoss(kind);
        tc.epochs = 2000;
        const RewardModel m = TrainReward(ds, tc).model;
        const std::string name = tc.loss.name();
        if (RankPreservationRate(m, *space) == 1.0) ++rank_full[name];
        const std::vector<double> r = m.Rewards(*space);
        double gap_err = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
          for (std::size_t b = 0; b < 4; ++b) {
            gap_err = std::max(gap_err, std::abs((r[a] - r[b]) -
                                                 (space->true_reward(a) - space->true_reward(b))));
          }
        }
        widest_gap_error[name] = std::max(widest_gap_error[name], gap_err);
      }
    }
    bool ok = worst_cpe < 1e-2;
    res.detail = "logistic max posterior error " + Fmt("%.3g", worst_cpe) + " (< 1e-2)";
    for (const char* name : {"sigmoid", "ramp"}) {
      ok = ok && rank_full[name] == kInstances && widest_gap_error[name] > 0.1;
      res.detail += std::string("; ") + name + " rank 1.0 in " + std::to_string(rank_full[name]) +
                    "/" + std::to_string(kInstances) + ", max gap error " +
                    Fmt("%.3g", widest_gap_error[name]) + " (> 0.1)";
    }
    res.criterion_met = ok;
  });
}

ProbeResult ProbeRobustnessOrdering(const ProbeOptions& o) {
  return Timed(6, "robustness ordering sweep", 300.0, [&](ProbeResult& res) {
    ExperimentConfig cfg;
    cfg.dataset.n_train = 10000;
    cfg.dataset.n_test = 1000;
    cfg.losses = {"logistic", "hinge", "sigmoid", "ramp", "unhinged"};
    for (double e : {0.0, 0.1, 0.2, 0.3, 0.4}) cfg.noise.push_back(NoiseSpec::Symmetric(e));
    for (std::uint64_t s = 0; s < 5; ++s) cfg.seeds.push_back(o.seed + s);
    cfg.learning_rate = 1.0;
    cfg.epochs = 300;
    cfg.jobs = o.jobs;
    const ExperimentReport rep = RunSweep(cfg);
    bool ok = rep.failures() == 0;
    res.detail = "";
    for (std::size_t n : {std::size_t{3}, std::size_t{4}}) {
      const double convex = std::max(rep.Aggregate("logistic", n).reward_accuracy.mean,
                                     rep.Aggregate("hinge", n).reward_accuracy.mean);
      char buf[200];
      std::snprintf(buf, sizeof(buf), "%seps=%.1f: logistic %.1f, hinge %.1f, sigmoid %.1f, ramp %.1f",
                    n == 3 ? "" : "; ", cfg.noise[n].eps_p,
                    100 * rep.Aggregate("logistic", n).reward_accuracy.mean,
                    100 * rep.Aggregate("hinge", n).reward_accuracy.mean,
                    100 * rep.Aggregate("sigmoid", n).reward_accuracy.mean,
                    100 * rep.Aggregate("ramp", n).reward_accuracy.mean);
      res.detail += buf;
      for (const char* sym : {"sigmoid", "ramp"}) {
        ok = ok && rep.Aggregate(sym, n).reward_accuracy.mean - convex >= 0.05;
      }
    }
    res.detail += " (need symmetric >= convex + 5 points)";
    res.criterion_met = ok;
  });
}

ProbeResult ProbeOfflineRobustness(const ProbeOptions& o) {
  return Timed(7, "offline robustness", 120.0, [&](ProbeResult& res) {
    Rng rng = InstanceRng(o, 7);
    const LossSpec sig = MakeLoss(LossKind::kSigmoid);
    const LossSpec logi = MakeLoss(LossKind::kLogistic);
    TrainConfig tc;
    tc.mode = RiskMode::kExact;
    tc.learning_rate = 1.0;
    tc.epochs = 1000;
    constexpr double kBeta = 1.0;
    int improved = 0, beaten = 0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t k = 3 + rng.UniformInt(4);
      const SpacePtr space = MakeSpace(UniformRewards(rng, k, 3.0));
      const PreferenceDataset clean = MakeExactBtUniform(space);
      // Uniform pairs give prior 1/2, so the effective rate is exactly 0.4.
      const double eps_p = 0.3 + 0.2 * rng.Uniform();
      const PreferenceDataset noisy =
          InjectNoise(clean, NoiseSpec::Asymmetric(eps_p, 0.8 - eps_p), rng);
      const std::vector<double> ref = UniformReference(k);
      const PolicyTable ps = TrainPolicyOffline(noisy, sig, ref, kBeta, tc).policy;
      const PolicyTable pl = TrainPolicyOffline(noisy, logi, ref, kBeta, tc).policy;
      if (ImprovementMargin(ps, *space) > 0.0) ++improved;
      // Clean risk is scored with the sigmoid loss for both policies.
      const double rs = EmpiricalRisk(ImplicitReward(ps), clean, sig, LabelView::kClean);
      const double rl = EmpiricalRisk(ImplicitReward(pl), clean, sig, LabelView::kClean);
      if (rs < rl) ++beaten;
    }
    res.criterion_met = improved >= 95 && beaten >= 90;
    res.detail = "sigmoid margin > 0 in " + std::to_string(improved) +
                 "/100 (>= 95); lower clean risk than logistic in " + std::to_string(beaten) +
                 "/100 (>= 90)";
  });
}

ProbeResult ProbeNumericalHygiene(const ProbeOptions& o) {
  return Timed(8, "numerical hygiene", 10.0, [&](ProbeResult& res) {
    Rng rng = InstanceRng(o, 8);
    const std::vector<LossSpec> losses = ProbeLosses();
    int checked = 0, bad = 0;
    std::string first_bad;
    auto record = [&](bool ok, const std::string& what) {
      ++checked;
      if (!ok && bad++ == 0) first_bad = what;
    };

    for (const LossSpec& loss : losses) {
      // Pointwise loss derivative.
      for (int i = 0; i < 100;) {
        const double z = -6.0 + 12.0 * rng.Uniform();
        if (NearKink(loss, z, 1e-3)) continue;
        ++i;
        const double fd = CentralDiff([&](double x) { return LossValue(loss, x); }, z);
        record(GradClose(LossGrad(loss, z), fd), loss.ToString() + " loss grad");
      }
      // Risk gradients (tabular, clipped tabular, linear) and the policy
      // objective gradient, one random point each per round.
      for (int i = 0; i < 100; ++i) {
        const std::size_t k = 3 + rng.UniformInt(3);
        std::vector<std::vector<double>> feats(k);
        for (auto& f : feats) f = {rng.Normal(), rng.Normal()};
        const SpacePtr space = MakeSpace(UniformRewards(rng, k, 3.0), feats);
        const PreferenceDataset clean = MakeExactBt(space, RandomPairWeights(rng, k, false));
        const PreferenceDataset ds =
            InjectNoise(clean, NoiseSpec::Asymmetric(0.3 * rng.Uniform(), 0.3 * rng.Uniform()), rng);

        const RewardModel models[] = {
            RewardModel::Tabular(RandomTable(rng, k, 1.5)),
            RewardModel::Tabular(RandomTable(rng, k, 1.5), 1.2),
            RewardModel::Linear(RandomTable(rng, 2, 1.0)),
        };
        for (const RewardModel& m : models) {
          bool skip = false;
          for (std::size_t a = 0; a < k; ++a) {
            if (m.clip && std::abs(std::abs(m.Raw(*space, a)) - *m.clip) < 1e-3) skip = true;
            for (std::size_t b = 0; b < k; ++b) {
              const double g = m.Reward(*space, a) - m.Reward(*space, b);
              if (a != b && NearKink(loss, g, 1e-3)) skip = true;
            }
          }
          if (skip) continue;
          const std::vector<double> grad = RiskGradient(m, ds, loss, LabelView::kNoisy);
          for (std::size_t j = 0; j < m.params.size(); ++j) {
            const double fd = CentralDiff(
                [&](double x) {
                  RewardModel p = m;
                  p.params[j] = x;
                  return EmpiricalRisk(p, ds, loss, LabelView::kNoisy);
                },
                m.params[j]);
            record(GradClose(grad[j], fd), loss.ToString() + " risk grad");
          }
        }

        const std::vector<double> ref = [&] {
          std::vector<double> v(k);
          for (auto& x : v) x = 0.05 + rng.Uniform();
          return Normalized(v);
        }();
        const double beta = 0.2 + 2.0 * rng.Uniform();
        const PolicyParams params{RandomTable(rng, k, 1.0)};
        const RewardModel imp = ImplicitReward(PolicyProbs(params, ref), ref, beta);
        bool skip = false;
        for (std::size_t a = 0; a < k; ++a) {
          for (std::size_t b = 0; b < k; ++b) {
            if (a != b && NearKink(loss, imp.params[a] - imp.params[b], 1e-3)) skip = true;
          }
        }
        if (skip) continue;
        const ObjectiveMode mode = loss.is_symmetric() ? ObjectiveMode::kSympo : ObjectiveMode::kBaseline;
        const std::vector<double> grad =
            SympoGradient(params, ds, loss, ref, beta, LabelView::kNoisy, mode);
        for (std::size_t j = 0; j < k; ++j) {
          const double fd = CentralDiff(
              [&](double x) {
                PolicyParams p = params;
                p.theta[j] = x;
                return SympoObjective(p, ds, loss, ref, beta, LabelView::kNoisy, mode);
              },
              params.theta[j]);
          record(GradClose(grad[j], fd), loss.ToString() + " policy objective grad");
        }
      }
    }

    // Every policy the library returns sums to one.
    double worst_sum = 0.0;
    for (int t = 0; t < 300; ++t) {
      const std::size_t k = 2 + rng.UniformInt(20);
      std::vector<double> ref(k);
      for (auto& x : ref) x = 1e-6 + rng.Uniform();
      ref = Normalized(ref);
      const std::vector<double> r = RandomTable(rng, k, 10.0);
      for (double beta : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
        const PolicyTable p = OptimalPolicy(r, ref, beta);
        double s = 0.0;
        for (double x : p.probs) s += x;
        worst_sum = std::max(worst_sum, std::abs(s - 1.0));
      }
      const std::vector<double> q = PolicyProbs(PolicyParams{RandomTable(rng, k, 30.0)}, ref);
      double s = 0.0;
      for (double x : q) s += x;
      worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    }
    {
      const SpacePtr space = MakeSpace(UniformRewards(rng, 5, 3.0));
      const PreferenceDataset ds = MakeExactBtUniform(space);
      TrainConfig tc;
      tc.mode = RiskMode::kExact;
      tc.epochs = 200;
      for (const char* l : {"sigmoid", "logistic", "rdpo:eps=0.2"}) {
        const PolicyTable p = TrainPolicyOffline(ds, ParseLoss(l), UniformReference(5), 0.5, tc).policy;
        double s = 0.0;
        for (double x : p.probs) s += x;
        worst_sum = std::max(worst_sum, std::abs(s - 1.0));
      }
    }
    res.criterion_met = bad == 0 && worst_sum <= 1e-12;
    res.detail = std::to_string(checked - bad) + "/" + std::to_string(checked) +
                 " gradient checks within 1e-6 relative" +
                 (bad ? " (first failure: " + first_bad + ")" : std::string()) +
                 "; max |sum(pi) - 1| = " + Fmt("%.3g", worst_sum) + " (<= 1e-12)";
  });
}

ProbeResult RunProbe(int id, const ProbeOptions& options) {
  switch (id) {
    case 1: return ProbeFlipInvariance(options);
    case 2: return ProbeAffineIdentity(options);
    case 3: return ProbePolicyImprovement(options);
    case 4: return ProbeOracleRank(options);
    case 5: return ProbeCpeSeparation(options);
    case 6: return ProbeRobustnessOrdering(options);
    case 7: return ProbeOfflineRobustness(options);
    case 8: return ProbeNumericalHygiene(options);
    default: throw ConfigError("no probe with id " + std::to_string(id));
  }
}

std::vector<ProbeResult> RunProbes(const std::vector<int>& ids, const ProbeOptions& options) {
  std::vector<ProbeResult> out;
  for (int id : ids) out.push_back(RunProbe(id, options));
  return out;
}

std::string FormatProbeLine(const ProbeResult& r) {
  char head[160];
  std::snprintf(head, sizeof(head), "[%s] %d %s (%.2fs / %.0fs%s): ", r.passed() ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.seconds, r.budget_seconds,
                r.within_budget() ? "" : ", over budget");
  return head + r.detail;
}

}  // namespace sympref
