// Copyright 2026 The qkd2way Authors
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

#ifndef QKD2WAY_RNG_HPP
#define QKD2WAY_RNG_HPP

#include <cstdint>
#include <limits>

namespace qkd2way {

/// 64-bit finalizer from SplitMix64. Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key from a seed and a stream index.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15ULL));
}

/// Counter-based generator: the n-th output is a pure function of (key, n),
/// so streams can be split by key without any shared state. Satisfies
/// UniformRandomBitGenerator, but the sampling helpers below are what the
/// simulator uses so that results do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : key_(key) {}

  /// Stream `stream` of the generator family identified by `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_key(seed, stream)); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// True with probability p. p <= 0 never, p >= 1 always; one draw either way.
  bool bernoulli(double p) { return uniform() < p; }

  int bit() { return static_cast<int>((*this)() >> 63); }

  /// Child stream; does not advance this generator.
  Rng split(std::uint64_t index) const { return Rng(derive_key(key_, index)); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qkd2way

#endif  // QKD2WAY_RNG_HPP
