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

#include <algorithm>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "prsguard/quantum_state.hpp"

namespace prsguard {

struct GateOp {
  int qubit;
  SingleQubitGate gate;
};

struct CzOp {
  int q0;
  int q1;
};

struct PauliOp {
  Pauli pauli;
};

using CircuitOp = std::variant<GateOp, CzOp, PauliOp>;

/// A straight-line gate sequence on a fixed register, applied front to back.
class Circuit {
 public:
  explicit Circuit(int n_qubits) : n_(n_qubits) { check_qubit_count(n_qubits); }

  int num_qubits() const { return n_; }
  std::span<const CircuitOp> ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

  Circuit& add_gate(int q, const SingleQubitGate& g) {
    check(q);
    ops_.emplace_back(GateOp{q, g});
    return *this;
  }
  Circuit& add_cz(int q0, int q1) {
    check(q0);
    check(q1);
    if (q0 == q1) throw std::invalid_argument("Circuit: CZ needs two distinct qubits");
    ops_.emplace_back(CzOp{q0, q1});
    return *this;
  }
  Circuit& add_global_pauli(Pauli p) {
    ops_.emplace_back(PauliOp{p});
    return *this;
  }
  Circuit& append(const Circuit& other) {
    if (other.n_ != n_) throw std::invalid_argument("Circuit: register size mismatch");
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
    return *this;
  }

  /// Reversed sequence of adjoints. CZ and global Paulis are Hermitian.
  Circuit inverse() const {
    Circuit inv(n_);
    inv.ops_.reserve(ops_.size());
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
      if (const auto* g = std::get_if<GateOp>(&*it)) {
        inv.ops_.emplace_back(GateOp{g->qubit, g->gate.adjoint()});
      } else {
        inv.ops_.push_back(*it);
      }
    }
    return inv;
  }

  void apply_in_place(std::span<Amplitude> amps) const {
    if (amps.size() != (std::size_t{1} << n_)) {
      throw std::invalid_argument("Circuit: amplitude buffer has wrong length");
    }
    for (const auto& op : ops_) {
      std::visit(
          [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, GateOp>) {
              detail::apply_1q(amps, n_, o.qubit, o.gate);
            } else if constexpr (std::is_same_v<T, CzOp>) {
              detail::apply_cz(amps, n_, o.q0, o.q1);
            } else {
              detail::apply_global_pauli(amps, n_, o.pauli);
            }
          },
          op);
    }
  }

  QuantumState apply(const QuantumState& s) const {
    if (s.num_qubits() != n_) throw std::invalid_argument("Circuit: state dimension mismatch");
    auto amps = detail::copy_amplitudes(s);
    apply_in_place(amps);
    return QuantumState(detail::TrustedNorm{}, n_, std::move(amps));
  }

 private:
  void check(int q) const {
    if (q < 0 || q >= n_) throw std::out_of_range("Circuit: qubit index out of range");
  }

  int n_;
  std::vector<CircuitOp> ops_;
};

/// Controlled-Z pairs (q, q+1 mod n) forming a ring. Two qubits share a single
/// pair (the ring would apply CZ twice and cancel); one qubit has none.
inline std::vector<std::pair<int, int>> cz_ring_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  if (n == 2) {
    pairs.emplace_back(0, 1);
  } else if (n > 2) {
    for (int q = 0; q < n; ++q) pairs.emplace_back(q, (q + 1) % n);
  }
  return pairs;
}

}  // namespace prsguard
