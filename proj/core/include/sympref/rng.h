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

#ifndef SYMPREF_RNG_H_
#define SYMPREF_RNG_H_

#include <cstdint>

namespace sympref {

// Independent random streams derived from one experiment seed.
enum class Stream : std::uint64_t {
  kPairs = 1,
  kLabels = 2,
  kNoise = 3,
  kFlips = 4,
  kInit = 5,
  kFeatures = 6,
  kInstances = 7,
};

// Counter-based generator: output i of (seed, stream) is a SplitMix64
// finalization of a key derived from both and the counter i. Every stream is
// reproducible bit for bit on any platform; no std:: distributions are used.
class Rng {
 public:
  Rng(std::uint64_t seed, Stream stream);
  Rng(std::uint64_t seed, Stream stream, std::uint64_t substream);

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);
  // Standard normal via Box-Muller; caches the second variate.
  double Normal();
  bool Bernoulli(double p);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace sympref

#endif  // SYMPREF_RNG_H_
