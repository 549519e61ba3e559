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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "prsguard/encodings.hpp"
#include "test_support.hpp"

using namespace prsguard;
using namespace prsguard::testing;
using Catch::Approx;

namespace {

double fid(const QuantumState& a, const QuantumState& b) { return std::norm(inner_product(a, b)); }

// RZ(θ)^x |+>^n built gate by gate with explicit Kronecker products.
CVec param_phase_reference(const FeatureBits& x, const FeatureWeights& theta) {
  const int n = x.size();
  const double r = 1.0 / std::sqrt(2.0);
  CVec v(std::size_t{1} << n, std::pow(r, n));
  for (int q = 0; q < n; ++q) {
    if (!x[q]) continue;
    v = matvec(embed(to_mat(SingleQubitGate::rz(theta[q])), n, q), v);
  }
  return v;
}

}  // namespace

TEST_CASE("basis_encode", "[encodings]") {
  CHECK(basis_encode(FeatureBits::parse("00"))[0] == Amplitude(1.0));
  CHECK(basis_encode(FeatureBits::parse("01"))[1] == Amplitude(1.0));
  CHECK(fid(basis_encode(FeatureBits::parse("011")), basis_encode(FeatureBits::parse("010"))) == 0.0);
}

TEST_CASE("phase_encode", "[encodings]") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto p0 = phase_encode(FeatureBits::parse("0"));
  const auto p1 = phase_encode(FeatureBits::parse("1"));
  CHECK(p0[0].real() == Approx(r));
  CHECK(p0[1].real() == Approx(r));
  CHECK(p1[0].real() == Approx(r));
  CHECK(p1[1].real() == Approx(-r));

  const auto s11 = phase_encode(FeatureBits::parse("11"));
  const std::array<double, 4> want = {0.5, -0.5, -0.5, 0.5};
  for (std::size_t i = 0; i < 4; ++i) CHECK(s11[i] == Amplitude(want[i]));

  const auto plus = phase_encode(FeatureBits::zeros(4));
  for (std::uint64_t i = 0; i < 16; ++i) {
    const double f = fid(plus, phase_encode(FeatureBits::from_index(i, 4)));
    CHECK(f == Approx(i == 0 ? 1.0 : 0.0).margin(1e-12));
  }
}

TEST_CASE("phase_encode Gram matrix is the identity", "[encodings][property]") {
  for (int n = 1; n <= 4; ++n) {
    const std::uint64_t d = std::uint64_t{1} << n;
    for (std::uint64_t a = 0; a < d; ++a) {
      for (std::uint64_t b = 0; b < d; ++b) {
        const Amplitude g = inner_product(phase_encode(FeatureBits::from_index(a, n)),
                                          phase_encode(FeatureBits::from_index(b, n)));
        REQUIRE(std::abs(g - Amplitude(a == b ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("param_phase_encode examples", "[encodings]") {
  std::mt19937_64 gen(17);
  for (int n = 1; n <= 6; ++n) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); i += 3) {
      const auto x = FeatureBits::from_index(i, n);
      const auto s = param_phase_encode(x, FeatureWeights::uniform(n, std::numbers::pi));
      REQUIRE(fid(s, phase_encode(x)) == Approx(1.0).margin(1e-12));
    }
    std::uniform_real_distribution<double> ang(0.01, 6.27);
    std::vector<double> th(static_cast<std::size_t>(n));
    for (auto& t : th) t = ang(gen);
    const auto zero = param_phase_encode(FeatureBits::zeros(n), FeatureWeights(th));
    REQUIRE(max_abs_diff(zero.amplitudes(), phase_encode(FeatureBits::zeros(n)).amplitudes()) < 1e-15);
  }

  // Brute-force 2x2: RZ(π/2)|+> against |+>.
  const auto rz = SingleQubitGate::rz(std::numbers::pi / 2);
  const double r = 1.0 / std::sqrt(2.0);
  const CVec a = matvec(to_mat(rz), CVec{r, r});
  const double brute = overlap_sq(a, CVec{r, r});
  const FeatureWeights w({std::numbers::pi / 2});
  const double f = fid(param_phase_encode(FeatureBits::parse("1"), w), param_phase_encode(FeatureBits::parse("0"), w));
  CHECK(brute == Approx(0.5).margin(1e-15));
  CHECK(f == Approx(brute).margin(1e-12));
}

TEST_CASE("param_phase_encode matches gate-by-gate construction", "[encodings][property]") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> ang(0.01, 6.27);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6;
    std::vector<double> th(static_cast<std::size_t>(n));
    for (auto& t : th) t = ang(gen);
    const FeatureWeights w(th);
    const auto x = FeatureBits::from_index(gen() % (std::uint64_t{1} << n), n);
    REQUIRE(max_abs_diff(param_phase_encode(x, w).amplitudes(), param_phase_reference(x, w)) < 1e-12);
  }
}

TEST_CASE("pairwise fidelity law for parameterized phase encoding", "[encodings][property]") {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> ang(0.01, 6.27);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    std::vector<double> th(static_cast<std::size_t>(n));
    for (auto& t : th) t = ang(gen);
    const FeatureWeights w(th);
    const auto x = FeatureBits::from_index(gen() % (std::uint64_t{1} << n), n);
    const auto x2 = FeatureBits::from_index(gen() % (std::uint64_t{1} << n), n);
    double law = 1.0;
    for (int i = 0; i < n; ++i) {
      const double c = std::cos(w[i] * (x[i] - x2[i]) / 2);
      law *= c * c;
    }
    REQUIRE(fid(param_phase_encode(x, w), param_phase_encode(x2, w)) == Approx(law).margin(1e-10));
  }
}

TEST_CASE("encoders are deterministic", "[encodings]") {
  const auto x = FeatureBits::parse("1011001");
  const auto w = FeatureWeights::uniform(7, 1.3);
  CHECK(phase_encode(x) == phase_encode(x));
  CHECK(param_phase_encode(x, w) == param_phase_encode(x, w));
  CHECK(basis_encode(x) == basis_encode(x));
}

TEST_CASE("encoding errors", "[encodings]") {
  CHECK_THROWS_AS(param_phase_encode(FeatureBits::parse("101"), FeatureWeights::uniform(2, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(FeatureWeights({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(FeatureWeights({2 * std::numbers::pi}), std::invalid_argument);
  CHECK_THROWS_AS(FeatureWeights({-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FeatureBits::parse("10a"), std::invalid_argument);
  CHECK_THROWS_AS(phase_encode(FeatureBits{}), std::out_of_range);
}

TEST_CASE("binarize thresholds real-valued features", "[encodings]") {
  const std::vector<double> v = {0.1, 0.9, 0.5, 0.51};
  CHECK(binarize(v, 0.5).to_string() == "0101");
}
