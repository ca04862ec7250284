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

#include "sympref/prefgen.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "sympref/errors.h"
#include "sympref/losses.h"

namespace sympref {
namespace {

bool ValidLabel(int y) { return y == 1 || y == -1; }

void CheckRecord(const ActionSpace& space, const PreferenceRecord& r) {
  if (r.a1 >= space.size() || r.a2 >= space.size()) {
    throw LookupError("record refers to an action outside the space");
  }
  if (r.a1 == r.a2) throw DomainError("record compares an action with itself");
  if (!ValidLabel(r.clean_label) || !ValidLabel(r.noisy_label)) {
    throw DomainError("labels must be +1 or -1");
  }
}

}  // namespace

ActionSpace::ActionSpace(std::vector<std::string> ids,
                         std::vector<double> true_reward,
                         std::vector<std::vector<double>> features)
    : ids_(std::move(ids)),
      true_reward_(std::move(true_reward)),
      features_(std::move(features)) {
  if (ids_.size() < 2) throw DomainError("action space needs at least 2 actions");
  if (true_reward_.size() != ids_.size()) {
    throw DomainError("true_reward length differs from number of actions");
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw DomainError("duplicate action id '" + ids_[i] + "'");
    }
  }
  if (!features_.empty()) {
    if (features_.size() != ids_.size()) {
      throw DomainError("features must be given for every action");
    }
    const std::size_t d = features_.front().size();
    if (d == 0) throw DomainError("feature dimension must be at least 1");
    for (const auto& f : features_) {
      if (f.size() != d) throw DomainError("feature vectors differ in dimension");
    }
  }
}

std::size_t ActionSpace::feature_dim() const {
  return features_.empty() ? 0 : features_.front().size();
}

std::size_t ActionSpace::IndexOf(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw LookupError("unknown action id '" + id + "'");
  return it->second;
}

SpacePtr MakeSpace(std::vector<double> true_reward,
                   std::vector<std::vector<double>> features) {
  std::vector<std::string> ids;
  ids.reserve(true_reward.size());
  for (std::size_t i = 0; i < true_reward.size(); ++i) {
    ids.push_back("a" + std::to_string(i));
  }
  return std::make_shared<const ActionSpace>(std::move(ids),
                                             std::move(true_reward),
                                             std::move(features));
}

void NoiseSpec::Validate(std::optional<double> class_prior) const {
  if (mode == NoiseMode::kSymmetric && eps_p != eps_n) {
    throw DomainError("symmetric noise requires eps_p == eps_n");
  }
  const bool in_half = eps_p >= 0.0 && eps_p < 0.5 && eps_n >= 0.0 && eps_n < 0.5;
  if (in_half) return;
  const bool in_unit = eps_p >= 0.0 && eps_p <= 1.0 && eps_n >= 0.0 && eps_n <= 1.0;
  if (!in_unit) throw DomainError("noise rates must lie in [0, 1]");
  if (!class_prior) {
    throw DomainError(
        "noise rates outside [0, 0.5) need a class prior to check the "
        "effective rate");
  }
  if (!(EffectiveRate(*class_prior) < 0.5)) {
    throw DomainError("effective noise rate pi_p*eps_p + (1-pi_p)*eps_n must be below 0.5");
  }
}

PreferenceDataset::PreferenceDataset(SpacePtr space,
                                     std::vector<PreferenceRecord> records,
                                     std::uint64_t seed)
    : space_(std::move(space)), records_(std::move(records)), seed_(seed) {
  if (!space_) throw DomainError("dataset needs an action space");
  for (const auto& r : records_) CheckRecord(*space_, r);
}

PreferenceDataset::PreferenceDataset(SpacePtr space,
                                     std::vector<PreferenceRecord> records,
                                     std::vector<double> mass,
                                     std::uint64_t seed)
    : PreferenceDataset(std::move(space), std::move(records), seed) {
  if (mass.size() != records_.size()) {
    throw DomainError("mass must run parallel to records");
  }
  double total = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("masses must be finite and non-negative");
    total += m;
  }
  if (!records_.empty() && std::abs(total - 1.0) > 1e-9) {
    throw DomainError("exact-mode masses must sum to 1");
  }
  mass_ = std::move(mass);
}

double PreferenceDataset::total_weight() const {
  if (mass_.empty()) return static_cast<double>(records_.size());
  double total = 0.0;
  for (double m : mass_) total += m;
  return total;
}

double PreferenceDataset::ClassPrior() const {
  double pos = 0.0, total = 0.0;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    total += weight(i);
    if (records_[i].clean_label > 0) pos += weight(i);
  }
  return total > 0.0 ? pos / total : 0.0;
}

double PreferenceDataset::NoisyPrior() const {
  double pos = 0.0, total = 0.0;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    total += weight(i);
    if (records_[i].noisy_label > 0) pos += weight(i);
  }
  return total > 0.0 ? pos / total : 0.0;
}

std::pair<double, double> PreferenceDataset::FlipRates() const {
  double pos = 0.0, pos_flip = 0.0, neg = 0.0, neg_flip = 0.0;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    const double w = weight(i);
    if (r.clean_label > 0) {
      pos += w;
      if (r.noisy_label < 0) pos_flip += w;
    } else {
      neg += w;
      if (r.noisy_label > 0) neg_flip += w;
    }
  }
  return {pos > 0.0 ? pos_flip / pos : 0.0, neg > 0.0 ? neg_flip / neg : 0.0};
}

std::vector<double> PreferenceDataset::PairWeights() const {
  const std::size_t n = space_->size();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < records_.size(); ++i) {
    w[records_[i].a1 * n + records_[i].a2] += weight(i);
  }
  return w;
}

double BtProbability(const ActionSpace& space, std::size_t a1, std::size_t a2) {
  if (a1 >= space.size() || a2 >= space.size()) {
    throw LookupError("action index outside the space");
  }
  return Sigmoid(space.true_reward(a1) - space.true_reward(a2));
}

int BtLabel(const ActionSpace& space, std::size_t a1, std::size_t a2, Rng& rng) {
  if (a1 == a2) throw DomainError("Bradley-Terry label needs two distinct actions");
  return rng.Uniform() < BtProbability(space, a1, a2) ? 1 : -1;
}

int BtLabel(const ActionSpace& space, const std::string& a1,
            const std::string& a2, Rng& rng) {
  return BtLabel(space, space.IndexOf(a1), space.IndexOf(a2), rng);
}

PreferenceDataset MakeExactBt(SpacePtr space,
                              const std::vector<double>& pair_weights) {
  const std::size_t n = space->size();
  if (pair_weights.size() != n * n) {
    throw DomainError("pair_weights must be |A| x |A|");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = pair_weights[i * n + j];
      if (!(w >= 0.0)) throw DomainError("pair weights must be non-negative");
      if (i == j && w != 0.0) throw DomainError("pair weights must vanish on the diagonal");
      total += w;
    }
  }
  if (!(total > 0.0)) throw DomainError("pair weights must have positive mass");

  std::vector<PreferenceRecord> records;
  std::vector<double> mass;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = pair_weights[i * n + j] / total;
      if (w == 0.0) continue;
      const double p = BtProbability(*space, i, j);
      records.push_back({i, j, 1, 1, false});
      mass.push_back(w * p);
      records.push_back({i, j, -1, -1, false});
      mass.push_back(w * (1.0 - p));
    }
  }
  return PreferenceDataset(std::move(space), std::move(records), std::move(mass));
}

PreferenceDataset MakeExactBtUniform(SpacePtr space) {
  const std::size_t n = space->size();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && space->true_reward(i) != space->true_reward(j)) {
        w[i * n + j] = 1.0;
      }
    }
  }
  return MakeExactBt(std::move(space), w);
}

PreferenceDataset InjectNoise(const PreferenceDataset& ds,
                              const NoiseSpec& noise, Rng& rng) {
  noise.Validate(ds.ClassPrior());
  if (!ds.exact()) {
    std::vector<PreferenceRecord> records = ds.records();
    for (auto& r : records) {
      const double eps = r.clean_label > 0 ? noise.eps_p : noise.eps_n;
      // One draw per record keeps the stream aligned across noise rates.
      const bool flip = rng.Uniform() < eps;
      r.noisy_label = flip ? -r.clean_label : r.clean_label;
      r.flipped = flip;
    }
    PreferenceDataset out(ds.space_ptr(), std::move(records), ds.seed());
    out.set_noise(noise);
    return out;
  }

  // Merge masses per (a1, a2, clean) then split by the flip probability.
  std::map<std::tuple<std::size_t, std::size_t, int>, double> clean_mass;
  std::vector<std::tuple<std::size_t, std::size_t, int>> order;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& r = ds.records()[i];
    const auto key = std::make_tuple(r.a1, r.a2, r.clean_label);
    auto [it, inserted] = clean_mass.emplace(key, 0.0);
    if (inserted) order.push_back(key);
    it->second += ds.mass()[i];
  }
  std::vector<PreferenceRecord> records;
  std::vector<double> mass;
  for (const auto& key : order) {
    const auto [a1, a2, y] = key;
    const double m = clean_mass[key];
    const double eps = y > 0 ? noise.eps_p : noise.eps_n;
    if (eps < 1.0) {
      records.push_back({a1, a2, y, y, false});
      mass.push_back(m * (1.0 - eps));
    }
    if (eps > 0.0) {
      records.push_back({a1, a2, y, -y, true});
      mass.push_back(m * eps);
    }
  }
  PreferenceDataset out(ds.space_ptr(), std::move(records), std::move(mass), ds.seed());
  out.set_noise(noise);
  return out;
}

PreferenceDataset FlipSubset(const PreferenceDataset& ds,
                             const PairSelector& selector) {
  std::vector<PreferenceRecord> records = ds.records();
  for (auto& r : records) {
    if (selector && selector(r.a1, r.a2)) {
      std::swap(r.a1, r.a2);
      r.clean_label = -r.clean_label;
      r.noisy_label = -r.noisy_label;
    }
  }
  PreferenceDataset out =
      ds.exact() ? PreferenceDataset(ds.space_ptr(), std::move(records), ds.mass(), ds.seed())
                 : PreferenceDataset(ds.space_ptr(), std::move(records), ds.seed());
  out.set_noise(ds.noise());
  return out;
}

PreferenceDataset RandomFlip(const PreferenceDataset& ds, Rng& rng) {
  // Coins are drawn per distinct ordered pair, in first-appearance order.
  const std::size_t n = ds.space().size();
  std::unordered_map<std::size_t, bool> coin;
  for (const auto& r : ds.records()) {
    const std::size_t key = r.a1 * n + r.a2;
    if (!coin.contains(key)) coin.emplace(key, rng.Bernoulli(0.5));
  }
  return FlipSubset(ds, [&coin, n](std::size_t a1, std::size_t a2) {
    return coin.at(a1 * n + a2);
  });
}

PreferenceDataset FlipSymmetrize(const PreferenceDataset& ds) {
  if (!ds.exact()) throw DomainError("FlipSymmetrize needs an exact-mode dataset");
  std::vector<PreferenceRecord> records;
  std::vector<double> mass;
  records.reserve(2 * ds.size());
  mass.reserve(2 * ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& r = ds.records()[i];
    records.push_back(r);
    mass.push_back(0.5 * ds.mass()[i]);
    records.push_back({r.a2, r.a1, -r.clean_label, -r.noisy_label, r.flipped});
    mass.push_back(0.5 * ds.mass()[i]);
  }
  PreferenceDataset out(ds.space_ptr(), std::move(records), std::move(mass), ds.seed());
  out.set_noise(ds.noise());
  return out;
}

PreferenceDataset GenerateGaussianPairs(const GaussianPairsOptions& options,
                                        std::uint64_t seed) {
  if (options.n < 1) throw GenerationError("need at least one pair");
  double accept_pos = 1.0, accept_neg = 1.0;
  if (options.target_prior) {
    const double pi = *options.target_prior;
    if (!(pi > 0.0 && pi < 1.0)) {
      throw GenerationError("target prior must lie strictly inside (0, 1)");
    }
    // Both labels must be expected at least once among n records.
    if (static_cast<double>(options.n) * std::min(pi, 1.0 - pi) < 1.0) {
      throw GenerationError("target prior unreachable with n = " +
                            std::to_string(options.n) + " pairs");
    }
    // sign(a1 - a2) is +1 with probability 1/2; thin the majority side.
    if (pi >= 0.5) {
      accept_neg = (1.0 - pi) / pi;
    } else {
      accept_pos = pi / (1.0 - pi);
    }
  }
  Rng pairs(seed, Stream::kPairs);
  std::vector<double> values;
  std::vector<PreferenceRecord> records;
  values.reserve(2 * options.n);
  records.reserve(options.n);
  while (records.size() < options.n) {
    const double x1 = pairs.Normal();
    const double x2 = pairs.Normal();
    if (x1 == x2) continue;
    const int y = x1 > x2 ? 1 : -1;
    const double accept = y > 0 ? accept_pos : accept_neg;
    if (accept < 1.0 && !(pairs.Uniform() < accept)) continue;
    const std::size_t i = values.size();
    values.push_back(x1);
    values.push_back(x2);
    records.push_back({i, i + 1, y, y, false});
  }
  std::vector<std::string> ids;
  std::vector<std::vector<double>> features;
  ids.reserve(values.size());
  features.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ids.push_back("g" + std::to_string(i));
    features.push_back({values[i]});
  }
  auto space = std::make_shared<const ActionSpace>(std::move(ids), values,
                                                   std::move(features));
  return PreferenceDataset(std::move(space), std::move(records), seed);
}

SpacePtr MakeTabularSpace(const TabularOptions& options, std::uint64_t seed) {
  if (options.space_size < 2) throw GenerationError("space needs at least 2 actions");
  Rng rng(seed, Stream::kInstances);
  std::vector<double> reward(options.space_size);
  for (std::size_t i = 0; i < options.space_size; ++i) {
    switch (options.reward_law) {
      case RewardLaw::kDigits:
        reward[i] = static_cast<double>(i % 10);
        break;
      case RewardLaw::kUniform:
        reward[i] = 3.0 * rng.Uniform();
        break;
      case RewardLaw::kGaussian:
        reward[i] = rng.Normal();
        break;
    }
  }
  std::vector<std::vector<double>> features;
  if (options.features) {
    for (std::size_t i = 0; i < options.space_size; ++i) {
      if (options.reward_law == RewardLaw::kDigits) {
        std::vector<double> onehot(10, 0.0);
        onehot[i % 10] = 1.0;
        features.push_back(std::move(onehot));
      } else {
        features.push_back({reward[i]});
      }
    }
  }
  return MakeSpace(std::move(reward), std::move(features));
}

PreferenceDataset GenerateTabular(SpacePtr space, std::size_t n_pairs,
                                  std::uint64_t seed,
                                  std::uint64_t stream_offset) {
  if (n_pairs < 1) throw GenerationError("need at least one pair");
  const std::size_t n = space->size();
  std::vector<std::pair<std::size_t, std::size_t>> allowed;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && space->true_reward(i) != space->true_reward(j)) {
        allowed.emplace_back(i, j);
      }
    }
  }
  if (allowed.empty()) {
    throw GenerationError("no pair of actions with distinct rewards");
  }
  Rng pairs(seed, Stream::kPairs, stream_offset);
  Rng labels(seed, Stream::kLabels, stream_offset);
  std::vector<PreferenceRecord> records;
  records.reserve(n_pairs);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const auto [a1, a2] = allowed[pairs.UniformInt(allowed.size())];
    const int y = BtLabel(*space, a1, a2, labels);
    records.push_back({a1, a2, y, y, false});
  }
  return PreferenceDataset(std::move(space), std::move(records), seed);
}

PreferenceDataset GenerateTabular(const TabularOptions& options,
                                  std::uint64_t seed) {
  return GenerateTabular(MakeTabularSpace(options, seed), options.n_pairs, seed);
}

}  // namespace sympref
