// Copyright 2026 The prsguard Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "prsguard/bits.hpp"
#include "prsguard/prf.hpp"

namespace prsguard {

/// All sampling uses mt19937_64 plus the portable transforms below, so a seed
/// reproduces bit-identical results across standard libraries.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; derives independent stream seeds from (base, index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_stream(std::uint64_t base, std::uint64_t stream) {
  return Rng(derive_seed(base, stream));
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  // Lemire-free rejection keeps this portable and unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

inline int random_bit(Rng& rng) { return static_cast<int>(rng() >> 63); }

/// Box-Muller; one call consumes two draws.
inline double standard_normal(Rng& rng) {
  double u1;
  do {
    u1 = uniform01(rng);
  } while (u1 <= 0.0);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline FeatureBits random_bits(Rng& rng, int n) {
  std::vector<std::uint8_t> b(static_cast<std::size_t>(n));
  for (auto& v : b) v = static_cast<std::uint8_t>(random_bit(rng));
  return FeatureBits(std::move(b));
}

inline TrapdoorKey random_key(Rng& rng) {
  TrapdoorKey::Bytes bytes{};
  for (std::size_t w = 0; w < 4; ++w) {
    const std::uint64_t r = rng();
    for (std::size_t i = 0; i < 8; ++i) bytes[w * 8 + i] = static_cast<std::uint8_t>(r >> (56 - 8 * i));
  }
  return TrapdoorKey(bytes);
}

}  // namespace prsguard
