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

// Classical bitstrings to quantum states: computational basis, Z-twirl phase
// encoding Z^x|+>^n, and its RZ-weighted variant RZ(θ)^x|+>^n.

#pragma once

#include <bit>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prsguard/bits.hpp"
#include "prsguard/quantum_state.hpp"

namespace prsguard {

/// Per-feature RZ angles, radians, each strictly inside (0, 2π).
class FeatureWeights {
 public:
  FeatureWeights() = default;
  explicit FeatureWeights(std::vector<double> theta) : theta_(std::move(theta)) {
    for (std::size_t i = 0; i < theta_.size(); ++i) {
      const double t = theta_[i];
      if (!(t > 0.0 && t < 2 * std::numbers::pi)) {
        throw std::invalid_argument("FeatureWeights: theta[" + std::to_string(i) +
                                    "] = " + std::to_string(t) + " is outside (0, 2π)");
      }
    }
  }

  static FeatureWeights uniform(int n, double angle) {
    return FeatureWeights(std::vector<double>(static_cast<std::size_t>(n), angle));
  }

  int size() const { return static_cast<int>(theta_.size()); }
  double operator[](int i) const { return theta_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return theta_; }

  friend bool operator==(const FeatureWeights&, const FeatureWeights&) = default;

 private:
  std::vector<double> theta_;
};

inline QuantumState basis_encode(const FeatureBits& x) { return new_basis_state(x); }

/// Amplitude at y is 2^{-n/2} (-1)^{x·y}.
inline QuantumState phase_encode(const FeatureBits& x) {
  check_qubit_count(x.size());
  const int n = x.size();
  const std::uint64_t xi = x.to_index();
  const double a = std::pow(2.0, -0.5 * n);
  std::vector<Amplitude> amps(std::size_t{1} << n);
  for (std::size_t y = 0; y < amps.size(); ++y) {
    amps[y] = (std::popcount(xi & y) & 1) ? -a : a;
  }
  return QuantumState(detail::TrustedNorm{}, n, std::move(amps));
}

/// Product state ⊗_i (e^{-i x_i θ_i/2}|0> + e^{+i x_i θ_i/2}|1>)/√2.
inline QuantumState param_phase_encode(const FeatureBits& x, const FeatureWeights& theta) {
  check_qubit_count(x.size());
  if (theta.size() != x.size()) {
    throw std::invalid_argument("param_phase_encode: theta has " + std::to_string(theta.size()) +
                                " entries for " + std::to_string(x.size()) + " bits");
  }
  const int n = x.size();
  // Accumulate the total phase per index, then take one polar() per amplitude.
  std::vector<double> half(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) half[i] = x[i] ? theta[i] / 2 : 0.0;
  const double a = std::pow(2.0, -0.5 * n);
  std::vector<Amplitude> amps(std::size_t{1} << n);
  for (std::size_t y = 0; y < amps.size(); ++y) {
    double phase = 0.0;
    for (int i = 0; i < n; ++i) {
      const bool bit = (y >> (n - 1 - i)) & 1U;
      phase += bit ? half[i] : -half[i];
    }
    amps[y] = std::polar(a, phase);
  }
  return QuantumState(detail::TrustedNorm{}, n, std::move(amps));
}

/// Threshold binarizer for real-valued features: bit i = (value_i > threshold).
inline FeatureBits binarize(std::span<const double> values, double threshold) {
  std::vector<std::uint8_t> bits(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) bits[i] = values[i] > threshold ? 1 : 0;
  return FeatureBits(std::move(bits));
}

}  // namespace prsguard
