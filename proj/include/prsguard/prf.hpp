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

// Keyed classical derivations. Everything here is SHA-256 over a byte string
// with a one-byte domain tag; integers are fixed-width big-endian.
//
//   key from seed   SHA256(0x00 | seed:u64)
//   f_k(y)          SHA256(k | 0x01 | n:u16 | pack(y))[31] & 1
//   Pauli k_i       SHA256(k | 0x02 | i:u32)[0] mod 4, i = 1..T, 0→I 1→X 2→Y 3→Z
//   PRU angle       2π · SHA256(k | 0x03 | instance:u32 | layer:u32 | qubit:u32 | tag:u8)[0..8) / 2^64
//                   tag 0 = RY angle, tag 1 = RZ angle
//   fingerprint     SHA256(k | 0x04)[0..8)
//
// pack(y) stores bit 0 of y in the MSB of byte 0 and zero-pads the last byte.

#pragma once

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prsguard/bits.hpp"
#include "prsguard/circuit.hpp"
#include "prsguard/quantum_state.hpp"

namespace prsguard {

using Digest = std::array<std::uint8_t, 32>;

inline Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("sha256: EVP_Digest failed");
  }
  return out;
}

namespace detail {

inline void put_be(std::vector<std::uint8_t>& buf, std::uint64_t v, int width) {
  for (int i = width - 1; i >= 0; --i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace detail

inline constexpr std::uint8_t kTagKeygen = 0x00;
inline constexpr std::uint8_t kTagQprf = 0x01;
inline constexpr std::uint8_t kTagPauli = 0x02;
inline constexpr std::uint8_t kTagPru = 0x03;
inline constexpr std::uint8_t kTagFingerprint = 0x04;

/// 256-bit trapdoor / secret key.
class TrapdoorKey {
 public:
  using Bytes = std::array<std::uint8_t, 32>;

  TrapdoorKey() = default;
  explicit TrapdoorKey(const Bytes& bytes) : bytes_(bytes) {}

  static TrapdoorKey from_hex(std::string_view hex) {
    if (hex.size() != 64) {
      throw std::invalid_argument("TrapdoorKey: expected 64 hex characters, got " +
                                  std::to_string(hex.size()));
    }
    Bytes b{};
    for (std::size_t i = 0; i < 32; ++i) {
      const int hi = detail::hex_value(hex[2 * i]), lo = detail::hex_value(hex[2 * i + 1]);
      if (hi < 0 || lo < 0) throw std::invalid_argument("TrapdoorKey: invalid hex digit");
      b[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return TrapdoorKey(b);
  }

  std::string to_hex() const { return detail::to_hex(bytes_); }
  const Bytes& bytes() const { return bytes_; }

  /// First 8 bytes of a tagged hash of the key; safe to publish.
  std::array<std::uint8_t, 8> fingerprint() const {
    std::vector<std::uint8_t> msg(bytes_.begin(), bytes_.end());
    msg.push_back(kTagFingerprint);
    const auto d = sha256(msg);
    std::array<std::uint8_t, 8> fp{};
    std::copy_n(d.begin(), 8, fp.begin());
    return fp;
  }
  std::string fingerprint_hex() const { return detail::to_hex(fingerprint()); }

  friend bool operator==(const TrapdoorKey&, const TrapdoorKey&) = default;

 private:
  Bytes bytes_{};
};

/// GenTR with a reproducible seed.
inline TrapdoorKey gen_trapdoor(std::uint64_t seed) {
  std::vector<std::uint8_t> msg{kTagKeygen};
  detail::put_be(msg, seed, 8);
  return TrapdoorKey(sha256(msg));
}

/// GenTR from the OS CSPRNG.
inline TrapdoorKey gen_trapdoor() {
  TrapdoorKey::Bytes b{};
  if (RAND_bytes(b.data(), static_cast<int>(b.size())) != 1) {
    throw std::runtime_error("gen_trapdoor: RAND_bytes failed");
  }
  return TrapdoorKey(b);
}

namespace detail {

inline std::vector<std::uint8_t> keyed_prefix(const TrapdoorKey& k, std::uint8_t tag) {
  std::vector<std::uint8_t> msg(k.bytes().begin(), k.bytes().end());
  msg.push_back(tag);
  return msg;
}

inline std::vector<std::uint8_t> qprf_input(const TrapdoorKey& k, const FeatureBits& y) {
  auto msg = keyed_prefix(k, kTagQprf);
  put_be(msg, static_cast<std::uint64_t>(y.size()), 2);
  const auto packed = y.pack();
  msg.insert(msg.end(), packed.begin(), packed.end());
  return msg;
}

inline std::vector<std::uint8_t> pauli_input(const TrapdoorKey& k, std::uint32_t position) {
  auto msg = keyed_prefix(k, kTagPauli);
  put_be(msg, position, 4);
  return msg;
}

inline std::vector<std::uint8_t> pru_angle_input(const TrapdoorKey& k, std::uint32_t instance,
                                                 std::uint32_t layer, std::uint32_t qubit,
                                                 std::uint8_t rotation_tag) {
  auto msg = keyed_prefix(k, kTagPru);
  put_be(msg, instance, 4);
  put_be(msg, layer, 4);
  put_be(msg, qubit, 4);
  msg.push_back(rotation_tag);
  return msg;
}

}  // namespace detail

/// The phase predicate f_k : {0,1}^n -> {0,1}.
inline int qprf_bit(const TrapdoorKey& k, int n, const FeatureBits& y) {
  if (y.size() != n) {
    throw std::invalid_argument("qprf_bit: input has " + std::to_string(y.size()) +
                                " bits, expected " + std::to_string(n));
  }
  if (n < 1 || n > 0xFFFF) throw std::invalid_argument("qprf_bit: n out of range");
  return sha256(detail::qprf_input(k, y))[31] & 1;
}

/// f_k tabulated over all 2^n inputs, so the phase oracle costs 2^n hashes once.
class QprfTable {
 public:
  QprfTable(const TrapdoorKey& k, int n) : n_(n), bits_(std::size_t{1} << n) {
    check_qubit_count(n);
    for (std::size_t y = 0; y < bits_.size(); ++y) {
      bits_[y] = static_cast<std::uint8_t>(qprf_bit(k, n, FeatureBits::from_index(y, n)));
    }
  }

  int num_qubits() const { return n_; }
  int operator()(std::uint64_t y) const { return bits_[y]; }
  double sign(std::uint64_t y) const { return bits_[y] ? -1.0 : 1.0; }
  std::span<const std::uint8_t> bits() const { return bits_; }

 private:
  int n_;
  std::vector<std::uint8_t> bits_;
};

struct PauliKeySchedule {
  std::vector<Pauli> keys;

  int length() const { return static_cast<int>(keys.size()); }
  std::string to_string() const {
    std::string s;
    for (auto p : keys) s.push_back(pauli_symbol(p));
    return s;
  }
  friend bool operator==(const PauliKeySchedule&, const PauliKeySchedule&) = default;
};

/// k_1..k_T. Position i of the schedule depends only on (k, i), so schedules
/// for different T share a prefix; n does not enter the derivation.
inline PauliKeySchedule derive_pauli_schedule(const TrapdoorKey& k, int T, int n) {
  if (T < 1) throw std::invalid_argument("derive_pauli_schedule: T must be >= 1");
  check_qubit_count(n);
  PauliKeySchedule s;
  s.keys.reserve(static_cast<std::size_t>(T));
  for (int i = 1; i <= T; ++i) {
    const auto d = sha256(detail::pauli_input(k, static_cast<std::uint32_t>(i)));
    s.keys.push_back(static_cast<Pauli>(d[0] % 4));
  }
  return s;
}

inline double pru_angle(const TrapdoorKey& k, std::uint32_t instance, std::uint32_t layer,
                        std::uint32_t qubit, std::uint8_t rotation_tag) {
  const auto d = sha256(detail::pru_angle_input(k, instance, layer, qubit, rotation_tag));
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u = (u << 8) | d[static_cast<std::size_t>(i)];
  return static_cast<double>(u) * (2.0 * std::numbers::pi) * 0x1p-64;
}

/// Seeded layered circuit standing in for a pseudorandom unitary. Each layer is
/// RY(α) then RZ(β) on every qubit, followed by a CZ ring.
class PRUCircuit {
 public:
  struct Rotation {
    double ry;
    double rz;
  };

  PRUCircuit(int n_qubits, int layers, std::vector<Rotation> angles)
      : n_(n_qubits), layers_(layers), angles_(std::move(angles)), circuit_(n_qubits) {
    if (layers_ < 2) throw std::invalid_argument("PRUCircuit: need at least 2 layers");
    if (angles_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(layers_)) {
      throw std::invalid_argument("PRUCircuit: angle table has wrong size");
    }
    const auto ring = cz_ring_pairs(n_);
    for (int l = 0; l < layers_; ++l) {
      for (int q = 0; q < n_; ++q) {
        const auto& r = angle(l, q);
        circuit_.add_gate(q, SingleQubitGate::ry(r.ry)).add_gate(q, SingleQubitGate::rz(r.rz));
      }
      for (auto [a, b] : ring) circuit_.add_cz(a, b);
    }
    inverse_ = circuit_.inverse();
  }

  int num_qubits() const { return n_; }
  int num_layers() const { return layers_; }
  const Rotation& angle(int layer, int qubit) const {
    return angles_[static_cast<std::size_t>(layer * n_ + qubit)];
  }
  std::span<const Rotation> angles() const { return angles_; }
  const Circuit& circuit() const { return circuit_; }
  const Circuit& inverse_circuit() const { return inverse_; }

  QuantumState apply(const QuantumState& s) const { return circuit_.apply(s); }
  QuantumState apply_inverse(const QuantumState& s) const { return inverse_.apply(s); }

 private:
  int n_;
  int layers_;
  std::vector<Rotation> angles_;
  Circuit circuit_;
  Circuit inverse_{n_};
};

inline PRUCircuit derive_pru_circuit(const TrapdoorKey& k, int n, int layers,
                                     std::uint32_t instance = 0) {
  check_qubit_count(n);
  if (layers < 2) throw std::invalid_argument("derive_pru_circuit: L must be >= 2");
  std::vector<PRUCircuit::Rotation> angles;
  angles.reserve(static_cast<std::size_t>(n * layers));
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n; ++q) {
      const auto lu = static_cast<std::uint32_t>(l), qu = static_cast<std::uint32_t>(q);
      angles.push_back({pru_angle(k, instance, lu, qu, 0), pru_angle(k, instance, lu, qu, 1)});
    }
  }
  return PRUCircuit(n, layers, std::move(angles));
}

}  // namespace prsguard
