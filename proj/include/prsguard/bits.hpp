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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prsguard {

/// A classical sample as a fixed-length bitstring.
///
/// Bit 0 is the leftmost character of the textual form and maps to the most
/// significant bit of the basis index, so "10" is index 2.
class FeatureBits {
 public:
  FeatureBits() = default;

  explicit FeatureBits(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
      if (b > 1) throw std::invalid_argument("FeatureBits: elements must be 0 or 1");
    }
  }

  static FeatureBits parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("FeatureBits: invalid character in bitstring '" +
                                    std::string(text) + "'");
      }
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return FeatureBits(std::move(bits));
  }

  static FeatureBits from_index(std::uint64_t index, int n) {
    if (n < 0 || n > 63) throw std::invalid_argument("FeatureBits: width out of range");
    if (n < 63 && index >> n) throw std::invalid_argument("FeatureBits: index does not fit width");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) bits[i] = (index >> (n - 1 - i)) & 1U;
    return FeatureBits(std::move(bits));
  }

  static FeatureBits zeros(int n) { return FeatureBits(std::vector<std::uint8_t>(n, 0)); }

  int size() const { return static_cast<int>(bits_.size()); }
  std::uint8_t operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
  const std::vector<std::uint8_t>& values() const { return bits_; }

  std::uint64_t to_index() const {
    std::uint64_t idx = 0;
    for (auto b : bits_) idx = (idx << 1) | b;
    return idx;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  /// MSB-first packing into ceil(n/8) bytes, zero padded at the tail.
  std::vector<std::uint8_t> pack() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    }
    return out;
  }

  friend bool operator==(const FeatureBits&, const FeatureBits&) = default;
  friend auto operator<=>(const FeatureBits&, const FeatureBits&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace prsguard
