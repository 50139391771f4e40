/*
 * Copyright 2026 The multiuplift Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MULTIUPLIFT_RANDOM_H_
#define MULTIUPLIFT_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace multiuplift {

// Deterministic pseudo-random stream.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are implemented here rather than with the
// <random> distribution classes, whose algorithms are implementation
// defined:
//   * Uniform01: top 53 bits of one engine draw, scaled by 2^-53.
//   * UniformIndex: rejection sampling on a single 64-bit draw.
//   * Normal: Box-Muller, consuming two Uniform01 draws per pair.
//
// Independent streams are derived from a user seed and a stream tag with
// SplitMix64 (see StreamSeed), so that e.g. each feature column of a
// simulated dataset has its own stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  double Uniform01();
  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t UniformIndex(std::uint64_t bound);
  double Normal();
  bool Bernoulli(double p) { return Uniform01() < p; }

  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

std::uint64_t SplitMix64(std::uint64_t x);

// Seed for an independent stream identified by (seed, tag, index).
std::uint64_t StreamSeed(std::uint64_t seed, std::string_view tag,
                         std::uint64_t index = 0);

// Random permutation of 0..n-1.
std::vector<std::size_t> Permutation(std::size_t n, Rng& rng);

}  // namespace multiuplift

#endif  // MULTIUPLIFT_RANDOM_H_
