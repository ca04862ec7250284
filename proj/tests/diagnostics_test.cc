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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"
#include "sympref/errors.h"

namespace sympref {
namespace {

using testing::NaiveSigmoid;
using testing::TestRng;
using testing::WithinBinomialBand;

TEST(RewardAccuracy, Examples) {
  const PreferenceDataset test = GenerateTabular(TabularOptions{.n_pairs = 1000}, 1);
  const auto& truth = test.space().true_reward();
  EXPECT_EQ(RewardAccuracy(RewardModel::Tabular(truth), test), 1.0);
  std::vector<double> neg(truth.size());
  for (std::size_t a = 0; a < neg.size(); ++a) neg[a] = -truth[a];
  EXPECT_EQ(RewardAccuracy(RewardModel::Tabular(neg), test), 0.0);
  const PreferenceDataset empty(test.space_ptr(), {});
  EXPECT_THROW(RewardAccuracy(RewardModel::Tabular(truth), empty), DomainError);
}

TEST(RewardAccuracy, SignOfZeroIsPositive) {
  const SpacePtr s = MakeSpace({1.0, 0.0});
  const PreferenceDataset ds(s, {{0, 1, 1, 1, false}, {1, 0, -1, -1, false}});
  // A tied model predicts "a1 wins", which is right for (0,1) and wrong for (1,0).
  EXPECT_EQ(RewardAccuracy(RewardModel::Tabular({0.0, 0.0}), ds), 0.5);
}

TEST(RewardAccuracy, RandomModelNearHalf) {
  const SpacePtr s = MakeTabularSpace({.space_size = 2000, .reward_law = RewardLaw::kGaussian}, 3);
  const PreferenceDataset test = GenerateTabular(s, 20000, 3);
  TestRng rng(3);
  std::vector<double> r(2000);
  for (double& x : r) x = rng.Uniform(-1.0, 1.0);
  const double acc = RewardAccuracy(RewardModel::Tabular(r), test);
  EXPECT_TRUE(WithinBinomialBand(acc, 0.5, 20000, 3.0)) << acc;
}

TEST(RankPreservation, Examples) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(RankPreservationRate(RewardModel::Tabular({-5.0, 0.0, 0.1, 7.0, 100.0}), *s), 1.0);
  EXPECT_EQ(RankPreservationRate(RewardModel::Tabular({0.0, 2.0, 1.0, 3.0, 4.0}), *s), 0.9);
  EXPECT_EQ(RankPreservationRate(RewardModel::Tabular(std::vector<double>(5, 1.0)), *s), 0.0);
  const SpacePtr flat = MakeSpace({1.0, 1.0, 1.0});
  EXPECT_THROW(RankPreservationRate(RewardModel::Tabular({0.0, 1.0, 2.0}), *flat), DomainError);
}

TEST(CpeRecovery, Examples) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 3.0});
  const RewardModel truth = RewardModel::Tabular(s->true_reward());
  EXPECT_LT(CpeRecoveryError(truth, *s, MakeLoss(LossKind::kLogistic)), 1e-15);
  EXPECT_THROW(CpeRecoveryError(truth, *s, MakeLoss(LossKind::kSigmoid)), DomainError);
  // Squared loss on BT data: the optimal score is 2 eta - 1.
  std::vector<double> r(3);
  for (std::size_t a = 0; a < 3; ++a) r[a] = 0.0;
  EXPECT_NEAR(CpeRecoveryError(RewardModel::Tabular(r), *s, MakeLoss(LossKind::kSquared)),
              NaiveSigmoid(3.0) - 0.5, 1e-15);
}

TEST(CpeRecovery, LogisticTrainingOnFourActions) {
  const SpacePtr s = MakeSpace({0.0, 0.5, 1.5, 2.5});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  TrainConfig cfg;
  cfg.mode = RiskMode::kExact;
  cfg.learning_rate = 2.0;
  cfg.epochs = 5000;
  const TrainResult res = TrainReward(ds, cfg);
  EXPECT_LT(CpeRecoveryError(res.model, *s, cfg.loss), 1e-2);
  // Exponential loss links through sigma(2 score), which is also additive
  // under Bradley-Terry, so a tabular reward realizes it exactly.
  cfg.loss = MakeLoss(LossKind::kExponential);
  cfg.learning_rate = 0.5;
  const TrainResult ex = TrainReward(ds, cfg);
  EXPECT_LT(CpeRecoveryError(ex.model, *s, cfg.loss), 1e-2);
}

TEST(ConditionalRisk, SymmetricConstantAtHalf) {
  for (const LossSpec& s : {MakeLoss(LossKind::kSigmoid), MakeLoss(LossKind::kRamp),
                            MakeLoss(LossKind::kUnhinged)}) {
    for (double a = -20.0; a <= 20.0; a += 0.37) {
      EXPECT_NEAR(ConditionalRisk(s, 0.5, a), *s.symmetry_constant() / 2.0, 1e-12);
    }
  }
  EXPECT_THROW(ConditionalRisk(MakeLoss(LossKind::kHinge), 1.5, 0.0), DomainError);
}

TEST(ConditionalRisk, OptimumExamples) {
  const ConditionalOptimum sig = OptimalConditionalRisk(MakeLoss(LossKind::kSigmoid), 0.7);
  EXPECT_GT(sig.argmin, 0.0);
  EXPECT_TRUE(sig.at_boundary);
  const ConditionalOptimum hinge = OptimalConditionalRisk(MakeLoss(LossKind::kHinge), 1.0);
  EXPECT_EQ(hinge.value, 0.0);
  EXPECT_GE(hinge.argmin, 1.0);
  const ConditionalOptimum sq = OptimalConditionalRisk(MakeLoss(LossKind::kSquared), 0.8);
  EXPECT_NEAR(sq.argmin, 0.6, 1e-8);
  EXPECT_FALSE(sq.at_boundary);
  const ConditionalOptimum lg = OptimalConditionalRisk(MakeLoss(LossKind::kLogistic), 0.8);
  EXPECT_NEAR(lg.argmin, std::log(4.0), 1e-6);
  EXPECT_NEAR(lg.value, -0.8 * std::log(0.8) - 0.2 * std::log(0.2), 1e-12);
  EXPECT_THROW(OptimalConditionalRisk(MakeLoss(LossKind::kUnhinged), 0.7), DomainError);
}

// Property: the sign of the conditional-risk minimizer is sign(2 eta - 1)
// for every bounded-below loss in the zoo.
TEST(ConditionalRisk, CalibrationSignProbe) {
  for (const LossSpec& s : TableLosses()) {
    if (!s.bounded_below()) continue;
    for (double eta = 0.05; eta < 0.999; eta += 0.05) {
      if (std::abs(eta - 0.5) < 1e-9) continue;
      EXPECT_EQ(CalibrationSign(s, eta), eta > 0.5 ? 1 : -1) << s.name() << " eta " << eta;
    }
  }
}

TEST(Oracle, Refusals) {
  const SpacePtr big = MakeSpace({0, 1, 2, 3, 4, 5});
  EXPECT_THROW(BruteForceRiskMinimizer(*big, MakeLoss(LossKind::kLogistic), MakeExactBtUniform(big)),
               DomainError);
  const SpacePtr s = MakeSpace({0.0, 1.0});
  EXPECT_THROW(BruteForceRiskMinimizer(*s, MakeLoss(LossKind::kUnhinged), MakeExactBtUniform(s)),
               DomainError);
  EXPECT_THROW(BruteForceRiskMinimizer(*s, MakeLoss(LossKind::kLogistic),
                                       PreferenceDataset(s, {{0, 1, 1, 1, false}})),
               DomainError);
}

TEST(Oracle, TwoActionLogisticRecoversGap) {
  const SpacePtr s = MakeSpace({1.0, 0.0});
  const RewardModel m =
      BruteForceRiskMinimizer(*s, MakeLoss(LossKind::kLogistic), MakeExactBtUniform(s));
  EXPECT_NEAR(m.params[0] - m.params[1], 1.0, 1e-2);
  EXPECT_EQ(m.params[0], 0.0);
}

TEST(Oracle, MatchesDirectRiskEvaluation) {
  // The grid winner must not be beaten by any grid neighbour.
  const SpacePtr s = MakeSpace({0.0, 1.3, 2.1});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  const LossSpec loss = MakeLoss(LossKind::kExponential);
  const RewardModel m = BruteForceRiskMinimizer(*s, loss, ds);
  const double best = EmpiricalRisk(m, ds, loss, LabelView::kClean);
  for (std::size_t a = 1; a < 3; ++a) {
    for (double d : {-0.01, 0.01}) {
      RewardModel p = m;
      p.params[a] += d;
      EXPECT_GE(EmpiricalRisk(p, ds, loss, LabelView::kClean), best - 1e-12);
    }
  }
  // Exponential is CPE with eta = sigma(2 score): gaps are half the true gaps.
  EXPECT_NEAR(m.params[1] - m.params[0], 0.65, 1e-6);
}

TEST(Oracle, SigmoidThreeActionsRankPreserving) {
  const SpacePtr s = MakeSpace({0.0, 1.0, 2.0});
  const RewardModel m =
      BruteForceRiskMinimizer(*s, MakeLoss(LossKind::kSigmoid), MakeExactBtUniform(s));
  EXPECT_EQ(RankPreservationRate(m, *s), 1.0);
}

// Property: on random small exact Bradley-Terry instances the risk minimizer
// preserves the true ranking for losses whose minimizer is attained inside
// the oracle box.
TEST(Oracle, RankPreservationOnRandomInstances) {
  TestRng rng(21);
  const std::vector<LossSpec> losses = {
      MakeLoss(LossKind::kLogistic), MakeLoss(LossKind::kSquared),
      MakeLoss(LossKind::kExponential), MakeLoss(LossKind::kRamp)};
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.Int(2, 3));
    std::vector<double> truth(n);
    for (double& x : truth) x = rng.Uniform(0.0, 3.0);
    const SpacePtr s = MakeSpace(truth);
    const PreferenceDataset ds = MakeExactBtUniform(s);
    for (const LossSpec& loss : losses) {
      const RewardModel m = BruteForceRiskMinimizer(*s, loss, ds);
      EXPECT_EQ(RankPreservationRate(m, *s), 1.0)
          << loss.name() << " trial " << trial << " truth " << ::testing::PrintToString(truth)
          << " r " << ::testing::PrintToString(m.params);
    }
  }
}

// The hinge minimizer over rewards can tie actions whose true rewards differ:
// the per-pair optimum sign(2 eta - 1) is not a difference r(a1) - r(a2).
TEST(Oracle, HingeMinimizerCanTie) {
  const SpacePtr s = MakeSpace({0.849506, 0.40283, 0.989203});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  const LossSpec hinge = MakeLoss(LossKind::kHinge);
  const RewardModel m = BruteForceRiskMinimizer(*s, hinge, ds);
  EXPECT_NEAR(m.params[1], -1.0, 1e-9);
  EXPECT_NEAR(m.params[2], 0.0, 1e-9);
  EXPECT_NEAR(RankPreservationRate(m, *s), 2.0 / 3.0, 1e-15);
  // Breaking the tie in the right direction costs risk.
  RewardModel ordered = m;
  ordered.params[2] = 0.1;
  EXPECT_GT(EmpiricalRisk(ordered, ds, hinge, LabelView::kClean),
            EmpiricalRisk(m, ds, hinge, LabelView::kClean) + 1e-3);
}

// Sigmoid risk has no finite minimizer; a bounded box can force ties that a
// wider box removes.
TEST(Oracle, SigmoidTiesAreBoxArtifacts) {
  const SpacePtr s = MakeSpace({1.851, 1.999, 2.991, 2.965});
  const PreferenceDataset ds = MakeExactBtUniform(s);
  const LossSpec sig = MakeLoss(LossKind::kSigmoid);
  const RewardModel narrow = BruteForceRiskMinimizer(*s, sig, ds);
  EXPECT_LT(RankPreservationRate(narrow, *s), 1.0);
  OracleOptions wide;
  wide.lo = -20.0;
  wide.hi = 20.0;
  wide.step = 0.5;
  const RewardModel m = BruteForceRiskMinimizer(*s, sig, ds, wide);
  EXPECT_EQ(RankPreservationRate(m, *s), 1.0);
  EXPECT_LT(EmpiricalRisk(m, ds, sig, LabelView::kClean),
            EmpiricalRisk(narrow, ds, sig, LabelView::kClean));
}

// Under flip-symmetrized asymmetric noise, the noisy-risk minimizer of a
// symmetric loss ranks like the clean-risk minimizer.
TEST(Oracle, SymmetricLossesIgnoreSymmetrizedNoise) {
  const SpacePtr s = MakeSpace({0.0, 0.8, 2.0});
  const PreferenceDataset clean = MakeExactBtUniform(s);
  Rng rng(0, Stream::kNoise);
  const PreferenceDataset noisy =
      FlipSymmetrize(InjectNoise(clean, NoiseSpec::Asymmetric(0.35, 0.05), rng));
  for (LossKind k : {LossKind::kSigmoid, LossKind::kRamp}) {
    const LossSpec loss = MakeLoss(k);
    OracleOptions clean_view;
    clean_view.view = LabelView::kClean;
    const RewardModel mc = BruteForceRiskMinimizer(*s, loss, clean, clean_view);
    const RewardModel mn = BruteForceRiskMinimizer(*s, loss, noisy);
    EXPECT_EQ(RankPreservationRate(mc, *s), 1.0);
    EXPECT_EQ(RankPreservationRate(mn, *s), 1.0);
  }
}

}  // namespace
}  // namespace sympref
