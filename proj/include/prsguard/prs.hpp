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

// Pseudorandom-state encryption of encoded bitstrings and trapdoor inversion.
//
//   PhasePRS       (-1)^{f_k(y)} applied to Z^x|+>^n; equals Z^x|eval_k>
//   ParamPhasePRS  (-1)^{f_k(y)} applied to RZ(θ)^x|+>^n
//   BasisPRS       U O_{k_T} U ... O_{k_1} U |x>, one key-derived U reused
//
// Every encryption is a fixed unitary per key, so overlaps between two
// ciphertexts equal the overlaps between the two plaintext encodings.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "prsguard/bits.hpp"
#include "prsguard/circuit.hpp"
#include "prsguard/encodings.hpp"
#include "prsguard/prf.hpp"
#include "prsguard/quantum_state.hpp"
#include "prsguard/random.hpp"

namespace prsguard {

enum class Scheme { PhasePRS, ParamPhasePRS, BasisPRS };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PhasePRS: return "PhasePRS";
    case Scheme::ParamPhasePRS: return "ParamPhasePRS";
    case Scheme::BasisPRS: return "BasisPRS";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "PhasePRS") return Scheme::PhasePRS;
  if (name == "ParamPhasePRS") return Scheme::ParamPhasePRS;
  if (name == "BasisPRS") return Scheme::BasisPRS;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

struct PhaseParams {
  friend bool operator==(const PhaseParams&, const PhaseParams&) = default;
};
struct ParamPhaseParams {
  FeatureWeights theta;
  friend bool operator==(const ParamPhaseParams&, const ParamPhaseParams&) = default;
};
struct BasisParams {
  int T = 0;
  int L = 4;
  friend bool operator==(const BasisParams&, const BasisParams&) = default;
};

using SchemeParams = std::variant<PhaseParams, ParamPhaseParams, BasisParams>;

inline Scheme scheme_of(const SchemeParams& p) {
  return static_cast<Scheme>(p.index());
}

/// Default chain length T = 2n, L = 4.
inline BasisParams default_basis_params(int n) { return BasisParams{2 * n, 4}; }

struct EncryptedSample {
  SchemeParams params;
  QuantumState state;
  std::array<std::uint8_t, 8> key_fingerprint{};

  Scheme scheme() const { return scheme_of(params); }
  int num_qubits() const { return state.num_qubits(); }
};

/// Raised when a decode finds no basis index with probability above threshold,
/// typically a wrong key or wrong parameters.
class NoDecodableIndex : public std::runtime_error {
 public:
  explicit NoDecodableIndex(double best_probability)
      : std::runtime_error("no decodable index: largest basis probability " +
                           std::to_string(best_probability) + " below threshold"),
        best_(best_probability) {}
  double best_probability() const { return best_; }

 private:
  double best_;
};

inline constexpr double kDecodeThreshold = 0.99;

inline FeatureBits read_dominant_index(const QuantumState& s,
                                       double threshold = kDecodeThreshold) {
  const std::size_t idx = argmax_probability(s);
  const double p = s.probability(idx);
  if (!(p > threshold)) throw NoDecodableIndex(p);
  return FeatureBits::from_index(idx, s.num_qubits());
}

inline void check_width(const FeatureBits& x, int n, const char* what) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(what) + ": input has " + std::to_string(x.size()) +
                                " bits, expected " + std::to_string(n));
  }
}

/// GenEV: |eval_k> = 2^{-n/2} sum_y (-1)^{f_k(y)} |y>.
inline QuantumState gen_eval(const QprfTable& f) {
  const int n = f.num_qubits();
  const double a = std::pow(2.0, -0.5 * n);
  std::vector<Amplitude> amps(std::size_t{1} << n);
  for (std::size_t y = 0; y < amps.size(); ++y) amps[y] = a * f.sign(y);
  return QuantumState(detail::TrustedNorm{}, n, std::move(amps));
}

inline QuantumState gen_eval(const TrapdoorKey& k, int n) { return gen_eval(QprfTable(k, n)); }

/// Eval: Z^x applied to |eval>.
inline QuantumState qtf_eval(const QuantumState& eval, const FeatureBits& x) {
  check_width(x, eval.num_qubits(), "qtf_eval");
  const std::uint64_t xi = x.to_index();
  return apply_diagonal_phases(eval, [xi](std::uint64_t y) {
    return (std::popcount(xi & y) & 1) ? Amplitude(-1.0) : Amplitude(1.0);
  });
}

inline QuantumState apply_qprf_oracle(const QuantumState& s, const QprfTable& f) {
  if (s.num_qubits() != f.num_qubits()) {
    throw std::invalid_argument("phase oracle: dimension mismatch");
  }
  return apply_diagonal_phases(s, [&f](std::uint64_t y) { return Amplitude(f.sign(y)); });
}

struct ParamPhaseDecode {
  FeatureBits bits;
  std::vector<double> success_probability;
};

/// Two-outcome Helstrom measurement for equally likely pure qubit states.
struct HelstromBasis {
  SingleQubitGate rotation;  // maps the "decide 0" eigenvector to |0>
  double success_probability;
};

inline HelstromBasis helstrom_basis(const std::array<Amplitude, 2>& h0,
                                    const std::array<Amplitude, 2>& h1) {
  // M = |h0><h0| - |h1><h1| = [[a, b], [conj(b), -a]]
  const double a = std::norm(h0[0]) - std::norm(h1[0]);
  const Amplitude b = h0[0] * std::conj(h0[1]) - h1[0] * std::conj(h1[1]);
  const double lambda = std::sqrt(a * a + std::norm(b));
  std::array<Amplitude, 2> vp;
  if (lambda == 0.0) {
    vp = {1.0, 0.0};
  } else if (a >= 0.0) {
    vp = {a + lambda, std::conj(b)};
  } else {
    vp = {b, lambda - a};
  }
  const double norm = std::sqrt(std::norm(vp[0]) + std::norm(vp[1]));
  vp[0] /= norm;
  vp[1] /= norm;
  const std::array<Amplitude, 2> vm = {-std::conj(vp[1]), std::conj(vp[0])};
  // Rows are <v+| and <v-|.
  SingleQubitGate rot({std::conj(vp[0]), std::conj(vp[1]), std::conj(vm[0]), std::conj(vm[1])});
  return {rot, 0.5 * (1.0 + lambda)};
}

/// Encryption and trapdoor inversion for one (key, n, scheme) triple. Keyed
/// tables and circuits are derived once at construction.
class PrsCipher {
 public:
  PrsCipher(const TrapdoorKey& k, int n, SchemeParams params)
      : key_(k), n_(n), params_(std::move(params)), fingerprint_(k.fingerprint()) {
    check_qubit_count(n);
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ParamPhaseParams>) {
            if (p.theta.size() != n) {
              throw std::invalid_argument("ParamPhasePRS: theta has " +
                                          std::to_string(p.theta.size()) + " entries for n = " +
                                          std::to_string(n));
            }
          }
          if constexpr (std::is_same_v<T, BasisParams>) {
            if (p.T < 1) throw std::invalid_argument("BasisPRS: T must be >= 1");
            if (p.L < 2) throw std::invalid_argument("BasisPRS: L must be >= 2");
            chain_.emplace(build_chain(k, n, p));
            chain_inverse_.emplace(chain_->inverse());
          } else {
            qprf_.emplace(k, n);
          }
        },
        params_);
  }

  int num_qubits() const { return n_; }
  Scheme scheme() const { return scheme_of(params_); }
  const SchemeParams& params() const { return params_; }
  const TrapdoorKey& key() const { return key_; }

  /// The unencrypted encoding matching this scheme.
  QuantumState plain(const FeatureBits& x) const {
    check_width(x, n_, "encode");
    switch (scheme()) {
      case Scheme::PhasePRS: return phase_encode(x);
      case Scheme::ParamPhasePRS: return param_phase_encode(x, std::get<ParamPhaseParams>(params_).theta);
      case Scheme::BasisPRS: return basis_encode(x);
    }
    throw std::logic_error("unreachable");
  }

  /// Applies the keyed unitary to an arbitrary state.
  QuantumState apply_key_unitary(const QuantumState& s) const {
    if (chain_) return chain_->apply(s);
    return apply_qprf_oracle(s, *qprf_);
  }

  QuantumState apply_key_unitary_inverse(const QuantumState& s) const {
    if (chain_) return chain_inverse().apply(s);
    return apply_qprf_oracle(s, *qprf_);
  }

  QuantumState encrypt_state(const FeatureBits& x) const { return apply_key_unitary(plain(x)); }

  EncryptedSample encrypt(const FeatureBits& x) const {
    return EncryptedSample{params_, encrypt_state(x), fingerprint_};
  }

  /// Exact inversion for PhasePRS (oracle, then H^n) and BasisPRS (inverse
  /// chain); reads the unique index with probability above the threshold.
  FeatureBits invert(const QuantumState& s) const {
    check_state(s);
    switch (scheme()) {
      case Scheme::PhasePRS: return read_dominant_index(hadamard_all(apply_qprf_oracle(s, *qprf_)));
      case Scheme::BasisPRS: return read_dominant_index(chain_inverse().apply(s));
      case Scheme::ParamPhasePRS:
        throw std::invalid_argument("ParamPhasePRS has no exact inverse; use invert_param_phase");
    }
    throw std::logic_error("unreachable");
  }

  /// Undoes the oracle, then measures every qubit in the Helstrom basis for
  /// the x_i = 0 and x_i = 1 product factors and samples the joint outcome.
  ParamPhaseDecode invert_param_phase(const QuantumState& s, Rng& rng) const {
    check_state(s);
    if (scheme() != Scheme::ParamPhasePRS) {
      throw std::invalid_argument("invert_param_phase requires a ParamPhasePRS cipher");
    }
    const auto& theta = std::get<ParamPhaseParams>(params_).theta;
    auto amps = detail::copy_amplitudes(apply_qprf_oracle(s, *qprf_));
    ParamPhaseDecode out;
    out.success_probability.reserve(static_cast<std::size_t>(n_));
    const double r = 1.0 / std::sqrt(2.0);
    for (int q = 0; q < n_; ++q) {
      const double h = theta[q] / 2;
      const auto basis = helstrom_basis({Amplitude(r), Amplitude(r)},
                                        {std::polar(r, -h), std::polar(r, h)});
      detail::apply_1q(amps, n_, q, basis.rotation);
      out.success_probability.push_back(basis.success_probability);
    }
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t pick = amps.size() - 1;
    for (std::size_t y = 0; y < amps.size(); ++y) {
      acc += std::norm(amps[y]);
      if (u < acc) {
        pick = y;
        break;
      }
    }
    out.bits = FeatureBits::from_index(pick, n_);
    return out;
  }

  const Circuit& chain() const {
    if (!chain_) throw std::logic_error("chain() is only defined for BasisPRS");
    return *chain_;
  }

 private:
  static Circuit build_chain(const TrapdoorKey& k, int n, const BasisParams& p) {
    const PRUCircuit u = derive_pru_circuit(k, n, p.L, 0);
    const PauliKeySchedule schedule = derive_pauli_schedule(k, p.T, n);
    Circuit c(n);
    c.append(u.circuit());
    for (Pauli o : schedule.keys) {
      c.add_global_pauli(o);
      c.append(u.circuit());
    }
    return c;
  }

  const Circuit& chain_inverse() const { return *chain_inverse_; }

  void check_state(const QuantumState& s) const {
    if (s.num_qubits() != n_) {
      throw std::invalid_argument("ciphertext has " + std::to_string(s.num_qubits()) +
                                  " qubits, cipher expects " + std::to_string(n_));
    }
  }

  TrapdoorKey key_;
  int n_;
  SchemeParams params_;
  std::array<std::uint8_t, 8> fingerprint_;
  std::optional<QprfTable> qprf_;
  std::optional<Circuit> chain_;
  std::optional<Circuit> chain_inverse_;
};

// Free-function forms of the construction and inversion operations.

inline EncryptedSample encrypt_phase(const FeatureBits& x, const TrapdoorKey& k) {
  return PrsCipher(k, x.size(), PhaseParams{}).encrypt(x);
}

inline EncryptedSample encrypt_param_phase(const FeatureBits& x, const FeatureWeights& theta,
                                           const TrapdoorKey& k) {
  if (theta.size() != x.size()) {
    throw std::invalid_argument("encrypt_param_phase: theta and x lengths differ");
  }
  return PrsCipher(k, x.size(), ParamPhaseParams{theta}).encrypt(x);
}

inline EncryptedSample encrypt_basis(const FeatureBits& x, const TrapdoorKey& k, int T, int L) {
  return PrsCipher(k, x.size(), BasisParams{T, L}).encrypt(x);
}

inline EncryptedSample encrypt(const FeatureBits& x, const TrapdoorKey& k,
                               const SchemeParams& params) {
  return PrsCipher(k, x.size(), params).encrypt(x);
}

inline FeatureBits invert_phase(const TrapdoorKey& k, const QuantumState& s) {
  return PrsCipher(k, s.num_qubits(), PhaseParams{}).invert(s);
}

inline FeatureBits invert_basis(const TrapdoorKey& k, int T, int L, const QuantumState& s) {
  return PrsCipher(k, s.num_qubits(), BasisParams{T, L}).invert(s);
}

inline ParamPhaseDecode invert_param_phase(const TrapdoorKey& k, const FeatureWeights& theta,
                                           const QuantumState& s, Rng& rng) {
  if (theta.size() != s.num_qubits()) {
    throw std::invalid_argument("invert_param_phase: theta and state lengths differ");
  }
  return PrsCipher(k, s.num_qubits(), ParamPhaseParams{theta}).invert_param_phase(s, rng);
}

}  // namespace prsguard
