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

#ifndef SYMPREF_TESTS_ORACLES_H_
#define SYMPREF_TESTS_ORACLES_H_

// Independent reference computations used as test oracles. These evaluate
// the textbook formulas directly and never call into the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace sympref::testing {

inline double NaiveSigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Literal formulas, valid for moderate |z|.
inline double NaiveLoss(const std::string& name, double z) {
  if (name == "logistic") return std::log(1.0 + std::exp(-z));
  if (name == "hinge") return std::max(0.0, 1.0 - z);
  if (name == "squared") return (z - 1.0) * (z - 1.0);
  if (name == "exponential") return std::exp(-z);
  if (name == "sigmoid") return 1.0 / (1.0 + std::exp(z));
  if (name == "unhinged") return 1.0 - z;
  if (name == "ramp") return std::max(0.0, std::min(1.0, 0.5 - z / 2.0));
  return NAN;
}

inline double CentralDifference(const std::function<double(double)>& f,
                                double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// |a - b| / max(1, |b|): relative error that degrades to absolute near 0.
inline double RelErr(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

// Binomial 3-sigma or 4-sigma band check for an observed frequency.
inline bool WithinBinomialBand(double observed, double p, double n,
                               double sigmas) {
  const double sd = std::sqrt(p * (1.0 - p) / n);
  return std::abs(observed - p) <= sigmas * sd;
}

// Test-side randomness is deliberately independent of the library Rng.
class TestRng {
 public:
  explicit TestRng(unsigned seed) : gen_(seed) {}
  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int Int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  std::mt19937_64& gen() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace sympref::testing

#endif  // SYMPREF_TESTS_ORACLES_H_
