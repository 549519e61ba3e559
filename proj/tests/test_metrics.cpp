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

#include "prsguard/circuit.hpp"
#include "prsguard/metrics.hpp"
#include "test_support.hpp"

using namespace prsguard;
using namespace prsguard::testing;
using Catch::Approx;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

// E|<r|s>|^{2t} over all pairs of sign vectors in dimension d, by enumeration.
double enumerated_binary_moment(int d, int t) {
  const std::uint64_t count = std::uint64_t{1} << d;
  double acc = 0.0;
  for (std::uint64_t r = 0; r < count; ++r) {
    for (std::uint64_t s = 0; s < count; ++s) {
      double ov = 0.0;
      for (int y = 0; y < d; ++y) ov += (((r ^ s) >> y) & 1) ? -1.0 : 1.0;
      ov /= d;
      acc += std::pow(ov * ov, t);
    }
  }
  return acc / static_cast<double>(count * count);
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

TEST_CASE("fidelity and trace distance examples", "[metrics]") {
  const auto z0 = new_basis_state(FeatureBits::parse("0"));
  const auto z1 = new_basis_state(FeatureBits::parse("1"));
  const QuantumState plus(1, {kR, kR});
  CHECK(fidelity(z0, z0) == 1.0);
  CHECK(fidelity(z0, z1) == 0.0);
  CHECK(fidelity(z0, plus) == Approx(0.5).margin(1e-15));
  CHECK(trace_distance_pure(z0, z0) == 0.0);
  CHECK(trace_distance_pure(z0, z1) == Approx(1.0).margin(1e-15));
  CHECK(trace_distance_pure(z0, plus) == Approx(std::sqrt(0.5)).margin(1e-12));
  CHECK_THROWS_AS(fidelity(zero_state(1), zero_state(2)), std::invalid_argument);
  CHECK_THROWS_AS(trace_distance_pure(zero_state(1), zero_state(2)), std::invalid_argument);
}

TEST_CASE("trace distance agrees with the fidelity formula away from 1", "[metrics][property]") {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 6;
    const auto a = random_state(n, gen);
    const auto b = random_state(n, gen);
    REQUIRE(trace_distance_pure(a, b) == Approx(std::sqrt(1.0 - overlap_sq(a.amplitudes(), b.amplitudes())))
                                             .margin(1e-12));
    REQUIRE(trace_distance_pure(a, a) < 1e-12);
  }
}

TEST_CASE("fidelity symmetry and unitary invariance", "[metrics][property]") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 7;
    const auto a = random_state(n, gen);
    const auto b = random_state(n, gen);
    REQUIRE(std::abs(fidelity(a, b) - fidelity(b, a)) <= 1e-12);

    Circuit v(n);
    for (int g = 0; g < 30; ++g) {
      const int q = static_cast<int>(gen() % static_cast<std::uint64_t>(n));
      if (g % 3 == 0) v.add_gate(q, SingleQubitGate::ry(ang(gen)));
      if (g % 3 == 1) v.add_gate(q, SingleQubitGate::rz(ang(gen)));
      if (g % 3 == 2 && n > 1) v.add_cz(q, (q + 1) % n);
    }
    v.add_global_pauli(static_cast<Pauli>(gen() % 4));
    REQUIRE(std::abs(fidelity(v.apply(a), v.apply(b)) - fidelity(a, b)) <= 1e-9);
  }
}

TEST_CASE("invariance_delta", "[metrics]") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ang(0.01, 6.27);
  Rng rng(12);
  const auto x = FeatureBits::parse("10110");
  CHECK(invariance_delta(x, x, PhaseParams{}, gen_trapdoor(1)) == Approx(0.0).margin(1e-12));
  CHECK(invariance_delta(x, FeatureBits::parse("10111"), PhaseParams{}, gen_trapdoor(1)) ==
        Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(invariance_delta(x, FeatureBits::parse("10"), PhaseParams{}, gen_trapdoor(1)),
                  std::invalid_argument);

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> th(8);
    for (auto& t : th) t = ang(gen);
    const auto a = FeatureBits::from_index(gen() % 256, 8);
    const auto b = FeatureBits::from_index(gen() % 256, 8);
    worst = std::max(worst, invariance_delta(a, b, ParamPhaseParams{FeatureWeights(th)}, random_key(rng)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("haar_sample", "[metrics]") {
  Rng a(5), b(5);
  const auto s = haar_sample(6, a);
  CHECK(s == haar_sample(6, b));
  double norm = 0.0;
  for (auto v : s.amplitudes()) norm += std::norm(v);
  CHECK(std::abs(norm - 1.0) <= 1e-9);
}

TEST_CASE("haar_moment closed form", "[metrics]") {
  CHECK(haar_moment(2, 1) == Approx(0.5));
  CHECK(haar_moment(8, 2) == Approx(1.0 / 36));
  for (int d : {2, 5, 64, 1000}) CHECK(haar_moment(d, 1) == Approx(1.0 / d));
  for (int d : {2, 4, 16})
    for (int t = 1; t <= 4; ++t) CHECK(haar_moment(d, t) == Approx(1.0 / binomial(d + t - 1, t)));
  CHECK_THROWS_AS(haar_moment(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(haar_moment(4, 0), std::invalid_argument);
}

TEST_CASE("haar_moment against Monte Carlo", "[metrics][statistical]") {
  // Independent oracle: pairs from std::normal_distribution, not haar_sample.
  std::mt19937_64 gen(2718);
  for (auto [n, t] : {std::pair{1, 1}, std::pair{3, 1}, std::pair{3, 2}}) {
    std::vector<double> v;
    for (int i = 0; i < 100000; ++i) {
      const auto a = random_state(n, gen);
      const auto b = random_state(n, gen);
      v.push_back(std::pow(overlap_sq(a.amplitudes(), b.amplitudes()), t));
    }
    const auto [m, se] = mean_and_std_error(v);
    CHECK(std::abs(m - haar_moment(std::int64_t{1} << n, t)) <= 3 * se);
  }
}

TEST_CASE("binary_phase_moment", "[metrics]") {
  for (int n = 1; n <= 3; ++n) {
    const int d = 1 << n;
    for (int t = 1; t <= 3; ++t) {
      REQUIRE(binary_phase_moment(d, t) == Approx(enumerated_binary_moment(d, t)).epsilon(1e-12));
    }
  }
  for (long long d : {4LL, 64LL, 1024LL}) {
    const double dd = static_cast<double>(d);
    CHECK(binary_phase_moment(d, 1) == Approx(1.0 / dd).epsilon(1e-12));
    CHECK(binary_phase_moment(d, 2) == Approx((3 * dd * dd - 2 * dd) / std::pow(dd, 4)).epsilon(1e-12));
  }
  // Exceeds Haar's 4th moment.
  CHECK(binary_phase_moment(64, 2) > haar_moment(64, 2));
}

TEST_CASE("cross_moment_estimate", "[metrics][statistical]") {
  SECTION("Haar/Haar matches the closed form") {
    for (int n : {2, 6}) {
      for (int t : {1, 2}) {
        const auto m = cross_moment_estimate(haar_ensemble(n), haar_ensemble(n), t, 20000, 1000 + n * 10 + t);
        CHECK(m.num_samples == 20000);
        CHECK(m.t == t);
        CHECK(std::abs(m.mean - haar_moment(std::int64_t{1} << n, t)) <= 3 * m.std_error);
      }
    }
  }

  SECTION("PhasePRS moments match the random-function oracle") {
    const auto prs1 = cross_moment_estimate(phase_prs_ensemble(6), phase_prs_ensemble(6), 1, 4000, 7);
    const auto prs2 = cross_moment_estimate(phase_prs_ensemble(6), phase_prs_ensemble(6), 2, 4000, 8);
    const auto rf2 = cross_moment_estimate(random_function_ensemble(6), random_function_ensemble(6), 2, 4000, 9);
    CHECK(std::abs(prs1.mean - 1.0 / 64) <= 3 * prs1.std_error);
    CHECK(std::abs(prs2.mean - binary_phase_moment(64, 2)) <= 3 * prs2.std_error);
    CHECK(std::abs(rf2.mean - binary_phase_moment(64, 2)) <= 3 * rf2.std_error);
  }

  SECTION("results do not depend on the worker count") {
    const auto a = cross_moment_estimate(haar_ensemble(4), haar_ensemble(4), 1, 500, 42, 1);
    const auto b = cross_moment_estimate(haar_ensemble(4), haar_ensemble(4), 1, 500, 42, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
  }

  CHECK_THROWS_AS(cross_moment_estimate(haar_ensemble(2), haar_ensemble(3), 1, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(cross_moment_estimate(haar_ensemble(2), haar_ensemble(2), 1, 99, 1), std::invalid_argument);
}

TEST_CASE("distinguisher_advantage", "[metrics][statistical]") {
  Rng rng(77);
  SECTION("identical ensembles") {
    const auto r = distinguisher_advantage(haar_ensemble(4), haar_ensemble(4), MomentStatistic::MomentT1, 400, rng);
    CHECK(r.advantage <= 3 * r.std_error + 1e-12);
  }
  SECTION("fixed state is detected") {
    const auto r = distinguisher_advantage(haar_ensemble(6), fixed_state_ensemble(zero_state(6)),
                                           MomentStatistic::MomentT1, 200, rng);
    CHECK(r.advantage >= 0.9);
  }
  SECTION("Haar vs PhasePRS with the t = 1 statistic") {
    const auto r = distinguisher_advantage(haar_ensemble(6), phase_prs_ensemble(6), MomentStatistic::MomentT1,
                                           200, rng);
    CHECK(r.advantage <= 3 * r.std_error + 1e-12);
  }
  SECTION("worker count does not change the result") {
    Rng a(9), b(9);
    const auto r1 = distinguisher_advantage(haar_ensemble(3), haar_ensemble(3), MomentStatistic::MomentT2, 100, a, 8, 1);
    const auto r2 = distinguisher_advantage(haar_ensemble(3), haar_ensemble(3), MomentStatistic::MomentT2, 100, b, 8, 4);
    CHECK(r1.advantage == r2.advantage);
    CHECK(r1.threshold == r2.threshold);
  }
  CHECK_THROWS_AS(distinguisher_advantage(haar_ensemble(2), haar_ensemble(2), MomentStatistic::MomentT1, 50, rng),
                  std::invalid_argument);
}
