// Copyright 2026 The lutaug Authors.
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

#ifndef LUTAUG_RNG_H_
#define LUTAUG_RNG_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace lutaug {

// Counter-based generator: output i is the SplitMix64 finalizer applied to
// key + (i + 1) * golden_gamma. Distributions are computed here rather than
// through <random> so streams are identical across standard libraries.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0);

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer on [0, n); n > 0.
  uint64_t UniformInt(uint64_t n);
  // Standard normal via Box-Muller (one pair of uniforms per draw).
  double Normal();
  Eigen::VectorXd NormalVector(Eigen::Index n);

  // Independent child stream; does not advance this generator.
  CounterRng Derive(uint64_t stream) const;

  uint64_t counter() const { return counter_; }

 private:
  CounterRng(uint64_t key, uint64_t counter, bool /*raw*/)
      : key_(key), counter_(counter) {}

  uint64_t key_;
  uint64_t counter_ = 0;
};

// Fisher-Yates shuffle of 0..n-1.
std::vector<int> ShuffledIndices(int n, CounterRng& rng);

}  // namespace lutaug

#endif  // LUTAUG_RNG_H_
