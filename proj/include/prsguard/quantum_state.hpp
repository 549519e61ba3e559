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

// Dense pure-state simulator. Qubit 0 is the most significant bit of the
// amplitude index. Every public operation is a pure function returning a new
// state; the in-place kernels in `detail` back them.

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prsguard/bits.hpp"
#include "prsguard/config.hpp"

namespace prsguard {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kUnitTolerance = 1e-12;

namespace detail {
struct TrustedNorm {};
}  // namespace detail

inline void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::out_of_range("qubit count " + std::to_string(n) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
  }
}

class QuantumState {
 public:
  QuantumState(int n_qubits, std::vector<Amplitude> amplitudes)
      : n_(n_qubits), amps_(std::move(amplitudes)) {
    check_qubit_count(n_);
    if (amps_.size() != (std::size_t{1} << n_)) {
      throw std::invalid_argument("QuantumState: amplitude vector length must be 2^n");
    }
    double norm = 0.0;
    for (const auto& a : amps_) norm += std::norm(a);
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
      throw std::invalid_argument("QuantumState: amplitudes are not normalized (norm^2 = " +
                                  std::to_string(norm) + ")");
    }
  }

  // For kernels that preserve the norm by construction.
  QuantumState(detail::TrustedNorm, int n_qubits, std::vector<Amplitude> amplitudes)
      : n_(n_qubits), amps_(std::move(amplitudes)) {}

  /// Normalizes an arbitrary nonzero vector.
  static QuantumState normalized(int n_qubits, std::vector<Amplitude> amplitudes) {
    double norm = 0.0;
    for (const auto& a : amplitudes) norm += std::norm(a);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw std::invalid_argument("QuantumState: cannot normalize a zero or non-finite vector");
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amplitudes) a *= scale;
    return QuantumState(n_qubits, std::move(amplitudes));
  }

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double probability(std::size_t i) const { return std::norm(amps_[i]); }

  friend bool operator==(const QuantumState&, const QuantumState&) = default;

 private:
  int n_ = 0;
  std::vector<Amplitude> amps_;
};

class SingleQubitGate {
 public:
  /// Row-major entries {m00, m01, m10, m11}; rejects non-unitary input.
  explicit SingleQubitGate(std::array<Amplitude, 4> entries) : m_(entries) {
    const auto& m = m_;
    const Amplitude c00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    const Amplitude c01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const Amplitude c11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    if (std::abs(c00 - 1.0) > kUnitTolerance || std::abs(c11 - 1.0) > kUnitTolerance ||
        std::abs(c01) > kUnitTolerance) {
      throw std::invalid_argument("SingleQubitGate: matrix is not unitary");
    }
  }

  static SingleQubitGate identity() { return SingleQubitGate({1.0, 0.0, 0.0, 1.0}); }
  static SingleQubitGate hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return SingleQubitGate({r, r, r, -r});
  }
  static SingleQubitGate pauli_x() { return SingleQubitGate({0.0, 1.0, 1.0, 0.0}); }
  static SingleQubitGate pauli_y() {
    return SingleQubitGate({0.0, Amplitude(0, -1), Amplitude(0, 1), 0.0});
  }
  static SingleQubitGate pauli_z() { return SingleQubitGate({1.0, 0.0, 0.0, -1.0}); }

  /// exp(-i a Y / 2)
  static SingleQubitGate ry(double angle) {
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    return SingleQubitGate({c, -s, s, c});
  }

  /// exp(-i a Z / 2) = diag(e^{-ia/2}, e^{+ia/2})
  static SingleQubitGate rz(double angle) {
    return SingleQubitGate({std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)});
  }

  SingleQubitGate adjoint() const {
    return SingleQubitGate({std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]),
                            std::conj(m_[3])});
  }

  const Amplitude& operator()(int row, int col) const { return m_[row * 2 + col]; }
  const std::array<Amplitude, 4>& entries() const { return m_; }

 private:
  std::array<Amplitude, 4> m_;
};

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_symbol(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

namespace detail {

inline std::size_t qubit_mask(int n, int q) { return std::size_t{1} << (n - 1 - q); }

inline void apply_1q(std::span<Amplitude> a, int n, int q, const SingleQubitGate& g) {
  const std::size_t stride = qubit_mask(n, q);
  const Amplitude m00 = g(0, 0), m01 = g(0, 1), m10 = g(1, 0), m11 = g(1, 1);
  for (std::size_t base = 0; base < a.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Amplitude a0 = a[i], a1 = a[i + stride];
      a[i] = m00 * a0 + m01 * a1;
      a[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

inline void apply_cz(std::span<Amplitude> a, int n, int q0, int q1) {
  const std::size_t both = qubit_mask(n, q0) | qubit_mask(n, q1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((i & both) == both) a[i] = -a[i];
  }
}

/// Unnormalized Walsh-Hadamard butterfly followed by the 2^{-n/2} scale.
inline void walsh_hadamard(std::span<Amplitude> a, int n) {
  for (std::size_t len = 1; len < a.size(); len <<= 1) {
    for (std::size_t base = 0; base < a.size(); base += 2 * len) {
      for (std::size_t i = base; i < base + len; ++i) {
        const Amplitude u = a[i], v = a[i + len];
        a[i] = u + v;
        a[i + len] = u - v;
      }
    }
  }
  const double scale = std::pow(2.0, -0.5 * n);
  for (auto& x : a) x *= scale;
}

/// Global tensor power P^{⊗n}.
inline void apply_global_pauli(std::span<Amplitude> a, int n, Pauli p) {
  const std::size_t mask = a.size() - 1;
  switch (p) {
    case Pauli::I:
      return;
    case Pauli::X:
      for (std::size_t i = 0; i < a.size() / 2; ++i) std::swap(a[i], a[mask ^ i]);
      return;
    case Pauli::Z:
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::popcount(i) & 1) a[i] = -a[i];
      }
      return;
    case Pauli::Y: {
      // <y|Y^{⊗n}|~y> = i^{|y|} (-i)^{n-|y|} = i^{2|y| - n}
      static constexpr std::array<Amplitude, 4> kPowI = {
          Amplitude(1, 0), Amplitude(0, 1), Amplitude(-1, 0), Amplitude(0, -1)};
      for (std::size_t i = 0; i < a.size() / 2; ++i) std::swap(a[i], a[mask ^ i]);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const int e = ((2 * std::popcount(i) - n) % 4 + 4) % 4;
        a[i] *= kPowI[static_cast<std::size_t>(e)];
      }
      return;
    }
  }
}

inline std::vector<Amplitude> copy_amplitudes(const QuantumState& s) {
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

}  // namespace detail

/// |x> with amplitude 1 at idx(x).
inline QuantumState new_basis_state(const FeatureBits& x) {
  check_qubit_count(x.size());
  std::vector<Amplitude> amps(std::size_t{1} << x.size());
  amps[x.to_index()] = 1.0;
  return QuantumState(detail::TrustedNorm{}, x.size(), std::move(amps));
}

inline QuantumState zero_state(int n) { return new_basis_state(FeatureBits::zeros(n)); }

inline void check_qubit_index(const QuantumState& s, int q) {
  if (q < 0 || q >= s.num_qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " +
                            std::to_string(s.num_qubits()) + "-qubit state");
  }
}

inline QuantumState apply_single_qubit_gate(const QuantumState& s, int q,
                                            const SingleQubitGate& g) {
  check_qubit_index(s, q);
  auto amps = detail::copy_amplitudes(s);
  detail::apply_1q(amps, s.num_qubits(), q, g);
  return QuantumState(detail::TrustedNorm{}, s.num_qubits(), std::move(amps));
}

inline QuantumState apply_cz(const QuantumState& s, int q0, int q1) {
  check_qubit_index(s, q0);
  check_qubit_index(s, q1);
  if (q0 == q1) throw std::invalid_argument("apply_cz: control and target coincide");
  auto amps = detail::copy_amplitudes(s);
  detail::apply_cz(amps, s.num_qubits(), q0, q1);
  return QuantumState(detail::TrustedNorm{}, s.num_qubits(), std::move(amps));
}

/// Multiplies amplitude y by phase(y). Every phase must have unit modulus.
template <typename PhaseFn>
  requires std::invocable<PhaseFn, std::uint64_t>
QuantumState apply_diagonal_phases(const QuantumState& s, PhaseFn&& phase) {
  auto amps = detail::copy_amplitudes(s);
  for (std::size_t y = 0; y < amps.size(); ++y) {
    const Amplitude p = phase(static_cast<std::uint64_t>(y));
    if (!(std::abs(std::abs(p) - 1.0) <= kUnitTolerance)) {
      throw std::invalid_argument("apply_diagonal_phases: phase at index " + std::to_string(y) +
                                  " is not unit modulus");
    }
    amps[y] *= p;
  }
  return QuantumState(detail::TrustedNorm{}, s.num_qubits(), std::move(amps));
}

inline QuantumState apply_global_pauli(const QuantumState& s, Pauli p) {
  auto amps = detail::copy_amplitudes(s);
  detail::apply_global_pauli(amps, s.num_qubits(), p);
  return QuantumState(detail::TrustedNorm{}, s.num_qubits(), std::move(amps));
}

inline QuantumState hadamard_all(const QuantumState& s) {
  auto amps = detail::copy_amplitudes(s);
  detail::walsh_hadamard(amps, s.num_qubits());
  return QuantumState(detail::TrustedNorm{}, s.num_qubits(), std::move(amps));
}

inline void check_same_dimension(const QuantumState& a, const QuantumState& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.num_qubits()) +
                                " vs " + std::to_string(b.num_qubits()) + " qubits");
  }
}

/// <a|b> = sum_y conj(a_y) b_y
inline Amplitude inner_product(const QuantumState& a, const QuantumState& b) {
  check_same_dimension(a, b);
  Amplitude acc = 0.0;
  const auto x = a.amplitudes(), y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

/// Index of the largest-probability amplitude (lowest index on ties).
inline std::size_t argmax_probability(const QuantumState& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.dim(); ++i) {
    if (s.probability(i) > s.probability(best)) best = i;
  }
  return best;
}

}  // namespace prsguard
