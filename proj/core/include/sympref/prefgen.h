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

#ifndef SYMPREF_PREFGEN_H_
#define SYMPREF_PREFGEN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sympref/rng.h"

namespace sympref {

// Finite action set with a ground-truth reward per action and optional
// feature vectors (all of one dimension) for linear reward models.
class ActionSpace {
 public:
  ActionSpace(std::vector<std::string> ids, std::vector<double> true_reward,
              std::vector<std::vector<double>> features = {});

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<double>& true_reward() const { return true_reward_; }
  double true_reward(std::size_t a) const { return true_reward_[a]; }
  bool has_features() const { return !features_.empty(); }
  std::size_t feature_dim() const;
  const std::vector<double>& features(std::size_t a) const {
    return features_[a];
  }
  const std::vector<std::vector<double>>& all_features() const {
    return features_;
  }
  // Throws LookupError for unknown ids.
  std::size_t IndexOf(const std::string& id) const;

  friend bool operator==(const ActionSpace& a, const ActionSpace& b) {
    return a.ids_ == b.ids_ && a.true_reward_ == b.true_reward_ &&
           a.features_ == b.features_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<double> true_reward_;
  std::vector<std::vector<double>> features_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const ActionSpace>;

// Ids "a0".."a{n-1}" with the given rewards and no features.
SpacePtr MakeSpace(std::vector<double> true_reward,
                   std::vector<std::vector<double>> features = {});

// One comparison. a1 != a2; labels are +1 (a1 preferred) or -1.
// `flipped` marks records whose noisy label differs from the clean one.
struct PreferenceRecord {
  std::size_t a1 = 0;
  std::size_t a2 = 0;
  int clean_label = 1;
  int noisy_label = 1;
  bool flipped = false;

  friend bool operator==(const PreferenceRecord&,
                         const PreferenceRecord&) = default;
};

enum class NoiseMode { kAsymmetric, kSymmetric };

// Class-conditional flip probabilities: P(noisy=-1 | clean=+1) = eps_p and
// P(noisy=+1 | clean=-1) = eps_n.
struct NoiseSpec {
  double eps_p = 0.0;
  double eps_n = 0.0;
  NoiseMode mode = NoiseMode::kAsymmetric;

  static NoiseSpec Symmetric(double eps) {
    return {eps, eps, NoiseMode::kSymmetric};
  }
  static NoiseSpec Asymmetric(double eps_p, double eps_n) {
    return {eps_p, eps_n, NoiseMode::kAsymmetric};
  }
  // pi_p * eps_p + (1 - pi_p) * eps_n.
  double EffectiveRate(double class_prior) const {
    return class_prior * eps_p + (1.0 - class_prior) * eps_n;
  }
  // Throws DomainError unless both rates lie in [0, 0.5), symmetric mode has
  // equal rates, or (fully asymmetric case) rates lie in [0, 1] and the
  // effective rate at `class_prior` is below 0.5.
  void Validate(std::optional<double> class_prior = std::nullopt) const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

enum class LabelView { kClean, kNoisy };

// Comparison records over one action space. In empirical mode every record
// has weight 1/n. In exact mode `mass` runs parallel to `records` and holds
// the probability p(a1, a2) * p(y | a1, a2) * p(noisy | y) of that outcome;
// masses sum to 1.
class PreferenceDataset {
 public:
  PreferenceDataset() = default;
  PreferenceDataset(SpacePtr space, std::vector<PreferenceRecord> records,
                    std::uint64_t seed = 0);
  PreferenceDataset(SpacePtr space, std::vector<PreferenceRecord> records,
                    std::vector<double> mass, std::uint64_t seed = 0);

  const ActionSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<PreferenceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  bool exact() const { return !mass_.empty(); }
  const std::vector<double>& mass() const { return mass_; }
  double weight(std::size_t i) const {
    return mass_.empty() ? 1.0 / static_cast<double>(records_.size())
                         : mass_[i];
  }
  // Unnormalized weight (1 per sample, or the mass) and its total. Risks
  // divide by the total once so that constant losses come out exact.
  double raw_weight(std::size_t i) const {
    return mass_.empty() ? 1.0 : mass_[i];
  }
  double total_weight() const;
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  const std::optional<NoiseSpec>& noise() const { return noise_; }
  void set_noise(std::optional<NoiseSpec> noise) { noise_ = noise; }

  // Weighted fraction of clean labels equal to +1.
  double ClassPrior() const;
  // Same, over noisy labels.
  double NoisyPrior() const;
  // Weighted P(noisy = -1 | clean = +1) and P(noisy = +1 | clean = -1).
  std::pair<double, double> FlipRates() const;
  // Marginal p(a1, a2) as a dense |A| x |A| row-major matrix.
  std::vector<double> PairWeights() const;

 private:
  SpacePtr space_;
  std::vector<PreferenceRecord> records_;
  std::vector<double> mass_;
  std::uint64_t seed_ = 0;
  std::optional<NoiseSpec> noise_;
};

// Returns +1 with probability sigmoid(r_true(a1) - r_true(a2)).
int BtLabel(const ActionSpace& space, std::size_t a1, std::size_t a2, Rng& rng);
int BtLabel(const ActionSpace& space, const std::string& a1,
            const std::string& a2, Rng& rng);
// P(label = +1) under the Bradley-Terry model.
double BtProbability(const ActionSpace& space, std::size_t a1, std::size_t a2);

// Exact-mode dataset with clean Bradley-Terry labels over the given
// row-major |A| x |A| pair marginal (diagonal must be zero, the rest
// normalized internally). noisy_label equals clean_label.
PreferenceDataset MakeExactBt(SpacePtr space, const std::vector<double>& pair_weights);
// Exact-mode dataset with uniform weights over every ordered pair of
// distinct actions whose true rewards differ.
PreferenceDataset MakeExactBtUniform(SpacePtr space);

// Replaces noisy labels: each record flips away from its clean label with
// probability eps_p (clean +1) or eps_n (clean -1). In exact mode the masses
// are split analytically instead of sampled.
PreferenceDataset InjectNoise(const PreferenceDataset& ds,
                              const NoiseSpec& noise, Rng& rng);

using PairSelector = std::function<bool(std::size_t a1, std::size_t a2)>;

// For records whose ordered pair satisfies `selector`: swap a1/a2 and negate
// both labels. Masses travel with their records.
PreferenceDataset FlipSubset(const PreferenceDataset& ds,
                             const PairSelector& selector);

// Draws one Bernoulli(1/2) per distinct ordered pair and flips the selected
// pairs with FlipSubset.
PreferenceDataset RandomFlip(const PreferenceDataset& ds, Rng& rng);

// Exact mode only: the expectation of RandomFlip over its coin flips. Each
// record keeps half its mass and sends the other half to its flipped image.
PreferenceDataset FlipSymmetrize(const PreferenceDataset& ds);

struct GaussianPairsOptions {
  std::size_t n = 1000;
  // Target clean class prior, reached by rejection-subsampling the
  // over-represented label.
  std::optional<double> target_prior;
};

// Scalar actions (a1, a2) ~ N(0, I_2), label sign(a1 - a2). Each sampled value
// becomes its own action with feature [value] and true reward value.
PreferenceDataset GenerateGaussianPairs(const GaussianPairsOptions& options,
                                        std::uint64_t seed);

enum class RewardLaw {
  kDigits,   // reward of action i is i mod 10
  kUniform,  // reward ~ U[0, 3)
  kGaussian  // reward ~ N(0, 1)
};

struct TabularOptions {
  std::size_t space_size = 10;
  RewardLaw reward_law = RewardLaw::kDigits;
  std::size_t n_pairs = 1000;
  // Attach a feature vector per action: one-hot of the digit for kDigits,
  // [reward] otherwise.
  bool features = false;
};

// Builds the action space once per seed (rewards depend only on the law and
// the seed).
SpacePtr MakeTabularSpace(const TabularOptions& options, std::uint64_t seed);

// Pairs drawn uniformly among ordered pairs of distinct actions with distinct
// rewards; clean labels from the Bradley-Terry model. `stream_offset`
// separates train and test draws that share a seed.
PreferenceDataset GenerateTabular(SpacePtr space, std::size_t n_pairs,
                                  std::uint64_t seed,
                                  std::uint64_t stream_offset = 0);
PreferenceDataset GenerateTabular(const TabularOptions& options,
                                  std::uint64_t seed);

}  // namespace sympref

#endif  // SYMPREF_PREFGEN_H_
