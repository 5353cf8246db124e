// Copyright 2026 The aecmos Authors. All Rights Reserved.
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

#ifndef AECMOS_RNG_H_
#define AECMOS_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace aecmos {

// SplitMix64 (Steele, Lea & Flood 2014). State advances by the golden-ratio
// increment 0x9E3779B97F4A7C15 and each output goes through the fixed
// xor-shift-multiply finalizer below. Everything that must reproduce across
// implementations (task assignment, slot positions, scale order) draws from
// this generator only, through Below() and Shuffle().
class SplitMix64 {
 public:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr uint64_t kMix1 = 0xBF58476D1CE4E5B9ULL;
  static constexpr uint64_t kMix2 = 0x94D049BB133111EBULL;

  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += kGamma);
    z = (z ^ (z >> 30)) * kMix1;
    z = (z ^ (z >> 27)) * kMix2;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) by rejection of the biased low range.
  uint64_t Below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = Next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Standard normal via Box-Muller, one variate per call.
  double Normal() {
    const double u1 = 1.0 - Uniform01();  // (0, 1]
    const double u2 = Uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  uint64_t state_;
};

// Independent child seed for stream `index` of a master seed.
inline uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  SplitMix64 rng(seed ^ (index * SplitMix64::kMix2));
  rng.Next();
  return rng.Next();
}

// Fisher-Yates, walking down from the last element: swap v[i] with
// v[Below(i + 1)].
template <typename T>
void Shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.Below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace aecmos

#endif  // AECMOS_RNG_H_
