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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"
#include "sympref/diagnostics.h"
#include "sympref/errors.h"

namespace sympref {
namespace {

using testing::CentralDifference;
using testing::NaiveSigmoid;
using testing::RelErr;
using testing::TestRng;

// Pair weights symmetric in (a, b), random otherwise.
std::vector<double> SymmetricWeights(std::size_t n, TestRng& rng) {
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      w[i * n + j] = w[j * n + i] = rng.Uniform(0.1, 1.0);
    }
  }
  return w;
}

std::vector<double> RandomRewards(std::size_t n, TestRng& rng, double scale = 2.0) {
  std::vector<double> r(n);
  for (double& x : r) x = rng.Uniform(-scale, scale);
  return r;
}

std::vector<LossSpec> ZooWithComposites() {
  std::vector<LossSpec> out = TableLosses();
  out.push_back(MakeLoss(LossKind::kCdpo, 0.2));
  out.push_back(MakeLoss(LossKind::kRdpo, 0.2));
  out.push_back(MakeLoss(LossKind::kRopo, std::nullopt, 14.0));
  return out;
}

TEST(EmpiricalRisk, ZeroModelSigmoidIsHalf) {
  const PreferenceDataset ds = GenerateTabular(TabularOptions{.n_pairs = 200}, 1);
  const RewardModel zero = RewardModel::Tabular(std::vector<double>(10, 0.0));
  EXPECT_EQ(EmpiricalRisk(zero, ds, MakeLoss(LossKind::kSigmoid), LabelView::kClean), 0.5);
  EXPECT_EQ(EmpiricalRisk(zero, ds, MakeLoss(LossKind::kSigmoid), LabelView::kNoisy), 0.5);
}

TEST(EmpiricalRisk, TwoActionEnumeration) {
  const SpacePtr s = MakeSpace({1.0, 0.0});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  const RewardModel truth = RewardModel::Tabular({1.0, 0.0});
  // Ordered pair (0,1): margin +-1 with P(+1) = sigma(1); pair (1,0) mirrors it.
  const double p = NaiveSigmoid(1.0);
  const double per_order = p * std::log(1.0 + std::exp(-1.0)) +
                           (1.0 - p) * std::log(1.0 + std::exp(1.0));
  const double expect = 0.5 * per_order + 0.5 * per_order;
  EXPECT_NEAR(EmpiricalRisk(truth, ds, MakeLoss(LossKind::kLogistic), LabelView::kClean),
              expect, 1e-15);
}

TEST(EmpiricalRisk, Errors) {
  const SpacePtr s = MakeSpace({1.0, 0.0});
  const PreferenceDataset empty(s, {});
  const RewardModel m = RewardModel::Tabular({0.0, 0.0});
  EXPECT_THROW(EmpiricalRisk(m, empty, MakeLoss(LossKind::kHinge), LabelView::kClean),
               DomainError);
  const PreferenceDataset ds = MakeExactBtUniform(s);
  EXPECT_THROW(EmpiricalRisk(RewardModel::Tabular({0.0}), ds, MakeLoss(LossKind::kHinge),
                             LabelView::kClean),
               DomainError);
  EXPECT_THROW(EmpiricalRisk(RewardModel::Linear({1.0}), ds, MakeLoss(LossKind::kHinge),
                             LabelView::kClean),
               DomainError);
}

TEST(RewardModel, ClipBounds) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.0});
  const RewardModel m = RewardModel::Tabular({-50.0, 3.0, 50.0}, 20.0);
  EXPECT_EQ(m.Rewards(*s), (std::vector<double>{-20.0, 3.0, 20.0}));
}

// Property: gradient agrees with central differences (h = 1e-5) within 1e-6
// relative (unit floor) for tabular, linear and clipped models.
TEST(RiskGradient, MatchesFiniteDifferences) {
  TestRng rng(31);
  const SpacePtr s = MakeSpace({0.0, 0.7, 1.5, 2.0, 3.1},
                               {{1.0, 0.2}, {0.3, -1.0}, {0.5, 0.5}, {-0.4, 1.2}, {2.0, 0.1}});
  const PreferenceDataset exact = MakeExactBt(s, SymmetricWeights(5, rng));
  Rng noise_rng(1, Stream::kNoise);
  const PreferenceDataset noisy = InjectNoise(exact, NoiseSpec::Asymmetric(0.2, 0.1), noise_rng);
  for (const LossSpec& loss : ZooWithComposites()) {
    for (int trial = 0; trial < 20; ++trial) {
      RewardModel m = trial % 2 == 0 ? RewardModel::Tabular(RandomRewards(5, rng))
                                     : RewardModel::Linear(RandomRewards(2, rng));
      if (trial % 4 == 3) m.clip = 1.0;
      const auto grad = RiskGradient(m, noisy, loss, LabelView::kNoisy);
      for (std::size_t k = 0; k < m.params.size(); ++k) {
        auto f = [&](double x) {
          RewardModel p = m;
          p.params[k] = x;
          return EmpiricalRisk(p, noisy, loss, LabelView::kNoisy);
        };
        EXPECT_LE(RelErr(grad[k], CentralDifference(f, m.params[k])), 1e-6)
            << loss.ToString() << " trial " << trial << " k " << k;
      }
    }
  }
}

TEST(RiskGradient, UnhingedIsNegativeNetPreference) {
  TestRng rng(5);
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.0, 4.0});
  const PreferenceDataset ds = MakeExactBt(s, SymmetricWeights(4, rng));
  const RewardModel m = RewardModel::Tabular(RandomRewards(4, rng));
  const auto grad = RiskGradient(m, ds, MakeLoss(LossKind::kUnhinged), LabelView::kClean);
  std::vector<double> net(4, 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& r = ds.records()[i];
    net[r.a1] += ds.mass()[i] * r.clean_label;
    net[r.a2] -= ds.mass()[i] * r.clean_label;
  }
  for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(grad[a], -net[a], 1e-15);
}

TEST(RiskGradient, ZeroOutsideClipBand) {
  const SpacePtr s = MakeSpace({0.0, 1.0});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  const RewardModel m = RewardModel::Tabular({-30.0, 30.0}, 20.0);
  const auto grad = RiskGradient(m, ds, MakeLoss(LossKind::kLogistic), LabelView::kClean);
  EXPECT_EQ(grad[0], 0.0);
  EXPECT_EQ(grad[1], 0.0);
}

TrainConfig ExactConfig(LossKind kind, int epochs, double lr) {
  TrainConfig cfg;
  cfg.loss = MakeLoss(kind);
  cfg.epochs = epochs;
  cfg.learning_rate = lr;
  cfg.mode = RiskMode::kExact;
  return cfg;
}

TEST(TrainReward, TraceShapeAndInitialRisk) {
  const PreferenceDataset ds = MakeExactBtUniform(MakeSpace({0.0, 1.0, 2.0}));
  const TrainResult res = TrainReward(ds, ExactConfig(LossKind::kSigmoid, 25, 0.5));
  EXPECT_EQ(res.trace.size(), 26u);
  EXPECT_EQ(res.trace.clean_risk.size(), 26u);
  EXPECT_EQ(res.trace.grad_norm.size(), 26u);
  EXPECT_EQ(res.trace.noisy_risk[0], 0.5);
}

TEST(TrainReward, ConfigErrors) {
  const PreferenceDataset exact = MakeExactBtUniform(MakeSpace({0.0, 1.0}));
  TrainConfig cfg = ExactConfig(LossKind::kLogistic, 0, 0.1);
  EXPECT_THROW(TrainReward(exact, cfg), ConfigError);
  cfg.epochs = 5;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(TrainReward(exact, cfg), ConfigError);
  cfg.learning_rate = 0.1;
  cfg.mode = RiskMode::kEmpirical;
  EXPECT_THROW(TrainReward(exact, cfg), ConfigError);
  cfg.mode = RiskMode::kExact;
  cfg.model_kind = ModelKind::kLinear;
  EXPECT_THROW(TrainReward(exact, cfg), ConfigError);
}

TEST(TrainReward, LogisticRecoversGapsAndStationarity) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.5});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  const TrainResult res = TrainReward(ds, ExactConfig(LossKind::kLogistic, 20000, 2.0));
  const auto r = res.model.Rewards(*s);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_NEAR(r[a] - r[b], s->true_reward(a) - s->true_reward(b), 1e-2);
    }
  }
  EXPECT_LT(res.trace.grad_norm.back(), 1e-6);
}

TEST(TrainReward, SigmoidPreservesRankNotMagnitude) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.5});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  const TrainResult res = TrainReward(ds, ExactConfig(LossKind::kSigmoid, 5000, 2.0));
  EXPECT_EQ(RankPreservationRate(res.model, *s), 1.0);
  const auto r = res.model.Rewards(*s);
  EXPECT_GT(std::abs((r[2] - r[0]) - 2.5), 0.1);
}

TEST(TrainReward, UnhingedNeedsClip) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.0});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  TrainConfig cfg = ExactConfig(LossKind::kUnhinged, 2000, 0.5);
  try {
    TrainReward(ds, cfg);
    FAIL() << "expected divergence";
  } catch (const TrainingError& e) {
    EXPECT_EQ(e.epoch(), 0);
  }
  cfg.clip = 20.0;
  const TrainResult res = TrainReward(ds, cfg);
  for (double r : res.model.Rewards(*s)) {
    EXPECT_GE(r, -20.0);
    EXPECT_LE(r, 20.0);
  }
  EXPECT_EQ(RankPreservationRate(res.model, *s), 1.0);
}

TEST(TrainReward, NonFiniteRiskIsReported) {
  // A huge step on the squared loss overflows within a few epochs.
  const PreferenceDataset ds = MakeExactBtUniform(MakeSpace({0.0, 1.0, 2.0}));
  EXPECT_THROW(TrainReward(ds, ExactConfig(LossKind::kSquared, 5000, 1e3)), TrainingError);
}

TEST(TrainReward, DeterministicLinear) {
  TabularOptions opt;
  opt.features = true;
  opt.n_pairs = 500;
  const PreferenceDataset ds = GenerateTabular(opt, 12);
  TrainConfig cfg;
  cfg.model_kind = ModelKind::kLinear;
  cfg.epochs = 50;
  cfg.seed = 12;
  const TrainResult a = TrainReward(ds, cfg), b = TrainReward(ds, cfg);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.trace.noisy_risk, b.trace.noisy_risk);
  cfg.seed = 13;
  EXPECT_NE(TrainReward(ds, cfg).model, a.model);
}

// Property: exact risk is unchanged by flipping any subset of pairs, for
// every loss and model.
TEST(FlipInvariance, ExactRiskAnySelector) {
  TestRng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.Int(2, 8));
    const SpacePtr s = MakeSpace(RandomRewards(n, rng, 3.0));
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) w[i * n + j] = i == j ? 0.0 : rng.Uniform(0.0, 1.0);
    }
    Rng noise_rng(trial, Stream::kNoise);
    const PreferenceDataset ds =
        InjectNoise(MakeExactBt(s, w), NoiseSpec::Asymmetric(0.3, 0.1), noise_rng);
    std::vector<bool> sel(n * n);
    for (std::size_t k = 0; k < n * n; ++k) sel[k] = rng.Int(0, 1) == 1;
    const PreferenceDataset f =
        FlipSubset(ds, [&](std::size_t a, std::size_t b) { return sel[a * n + b]; });
    const RewardModel m = RewardModel::Tabular(RandomRewards(n, rng, 3.0));
    for (const LossSpec& loss : ZooWithComposites()) {
      for (LabelView v : {LabelView::kClean, LabelView::kNoisy}) {
        EXPECT_NEAR(EmpiricalRisk(m, ds, loss, v), EmpiricalRisk(m, f, loss, v), 1e-12)
            << loss.ToString();
      }
    }
  }
}

TEST(AffineCheck, NoNoiseIsCleanRisk) {
  const PreferenceDataset ds = MakeExactBtUniform(MakeSpace({0.0, 1.0, 2.0}));
  const RewardModel m = RewardModel::Tabular({0.3, -0.2, 1.0});
  const AffineCheck c =
      ExactRiskAffineCheck(m, ds, NoiseSpec::Symmetric(0.0), MakeLoss(LossKind::kSigmoid));
  EXPECT_NEAR(c.lhs, c.clean_risk, 1e-15);
  EXPECT_NEAR(c.rhs, c.clean_risk, 1e-15);
  EXPECT_THROW(
      ExactRiskAffineCheck(m, ds, NoiseSpec::Symmetric(0.1), MakeLoss(LossKind::kLogistic)),
      DomainError);
}

// Property: for symmetric losses and symmetric pair weights the noisy risk is
// an affine function of the clean risk, so risk orderings are preserved.
TEST(AffineCheck, IdentityAndOrderPreservation) {
  TestRng rng(91);
  const std::vector<LossSpec> sym = {MakeLoss(LossKind::kSigmoid), MakeLoss(LossKind::kRamp),
                                     MakeLoss(LossKind::kUnhinged)};
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.Int(2, 7));
    const SpacePtr s = MakeSpace(RandomRewards(n, rng, 3.0));
    const PreferenceDataset ds = MakeExactBt(s, SymmetricWeights(n, rng));
    const double eps_p = rng.Uniform(0.0, 0.49), eps_n = rng.Uniform(0.0, 0.49);
    const NoiseSpec noise = NoiseSpec::Asymmetric(eps_p, eps_n);
    const RewardModel r1 = RewardModel::Tabular(RandomRewards(n, rng, 3.0));
    const RewardModel r2 = RewardModel::Tabular(RandomRewards(n, rng, 3.0));
    for (const LossSpec& loss : sym) {
      const AffineCheck c1 = ExactRiskAffineCheck(r1, ds, noise, loss);
      const AffineCheck c2 = ExactRiskAffineCheck(r2, ds, noise, loss);
      EXPECT_NEAR(c1.lhs, c1.rhs, 1e-10) << loss.ToString();
      EXPECT_NEAR(c1.effective_rate, 0.5 * (eps_p + eps_n), 1e-12);
      if (std::abs(c1.clean_risk - c2.clean_risk) > 1e-9) {
        EXPECT_EQ(c1.clean_risk > c2.clean_risk, c1.lhs > c2.lhs) << loss.ToString();
      }
    }
  }
}

TEST(AffineCheck, SigmoidQuarterRate) {
  TestRng rng(92);
  for (int trial = 0; trial < 20; ++trial) {
    const SpacePtr s = MakeSpace(RandomRewards(4, rng, 2.0));
    const PreferenceDataset ds = MakeExactBt(s, SymmetricWeights(4, rng));
    const RewardModel m = RewardModel::Tabular(RandomRewards(4, rng, 3.0));
    const AffineCheck c = ExactRiskAffineCheck(m, ds, NoiseSpec::Asymmetric(0.4, 0.1),
                                               MakeLoss(LossKind::kSigmoid));
    EXPECT_NEAR(c.effective_rate, 0.25, 1e-12);
    EXPECT_NEAR(c.lhs, c.rhs, 1e-10);
  }
}

// With unequal weights on (a, b) and (b, a), asymmetric noise does not reduce
// to an affine transform of the clean risk; only the marginal rates match.
TEST(AffineCheck, NeedsSymmetricPairWeights) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.0});
  std::vector<double> w = {0.0, 0.5, 0.1,
                           0.05, 0.0, 0.2,
                           0.1, 0.05, 0.0};
  const PreferenceDataset ds = MakeExactBt(s, w);
  const RewardModel m = RewardModel::Tabular({0.0, 2.0, 0.5});
  const AffineCheck c = ExactRiskAffineCheck(m, ds, NoiseSpec::Asymmetric(0.4, 0.05),
                                             MakeLoss(LossKind::kSigmoid));
  EXPECT_GT(std::abs(c.lhs - c.rhs), 1e-3);
  // Flip symmetrization does not change the risk either, so it cannot help.
  Rng rng(0, Stream::kNoise);
  const PreferenceDataset noisy = InjectNoise(ds, NoiseSpec::Asymmetric(0.4, 0.05), rng);
  EXPECT_NEAR(EmpiricalRisk(m, FlipSymmetrize(noisy), MakeLoss(LossKind::kSigmoid),
                            LabelView::kNoisy),
              c.lhs, 1e-14);
  // Symmetric noise restores the identity for any pair weights.
  const AffineCheck sym = ExactRiskAffineCheck(m, ds, NoiseSpec::Symmetric(0.3),
                                               MakeLoss(LossKind::kSigmoid));
  EXPECT_NEAR(sym.lhs, sym.rhs, 1e-12);
}

// Regression fixture: two models whose logistic noisy-risk ordering disagrees
// with their clean ordering. Found by randomized search.
TEST(NonRobustness, LogisticOrderingFlips) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.0});
  const PreferenceDataset clean = MakeExactBtUniform(s);
  Rng rng(0, Stream::kNoise);
  const PreferenceDataset noisy = InjectNoise(clean, NoiseSpec::Symmetric(0.3), rng);
  const RewardModel better = RewardModel::Tabular({-1.0, 1.0, 3.0});
  const RewardModel worse = RewardModel::Tabular({1.0, 1.0, -0.5});
  const LossSpec logistic = MakeLoss(LossKind::kLogistic);
  const double cb = EmpiricalRisk(better, clean, logistic, LabelView::kClean);
  const double cw = EmpiricalRisk(worse, clean, logistic, LabelView::kClean);
  const double nb = EmpiricalRisk(better, noisy, logistic, LabelView::kNoisy);
  const double nw = EmpiricalRisk(worse, noisy, logistic, LabelView::kNoisy);
  EXPECT_NEAR(cb, 0.608194, 1e-6);
  EXPECT_NEAR(cw, 1.17125, 1e-5);
  EXPECT_NEAR(nb, 1.09768, 1e-5);
  EXPECT_NEAR(nw, 0.987696, 1e-6);
  EXPECT_LT(cb, cw);
  EXPECT_GT(nb, nw);
  // The sigmoid loss keeps the clean ordering on the same instance.
  const LossSpec sigmoid = MakeLoss(LossKind::kSigmoid);
  EXPECT_EQ(EmpiricalRisk(better, clean, sigmoid, LabelView::kClean) <
                EmpiricalRisk(worse, clean, sigmoid, LabelView::kClean),
            EmpiricalRisk(better, noisy, sigmoid, LabelView::kNoisy) <
                EmpiricalRisk(worse, noisy, sigmoid, LabelView::kNoisy));
}

}  // namespace
}  // namespace sympref
