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

// Pure-state distances, Haar sampling and overlap-moment statistics.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prsguard/parallel.hpp"
#include "prsguard/prs.hpp"
#include "prsguard/quantum_state.hpp"
#include "prsguard/random.hpp"

namespace prsguard {

/// |<a|b>|^2. Values above 1 + 1e-9 indicate a corrupted state and throw.
inline double fidelity(const QuantumState& a, const QuantumState& b) {
  const double f = std::norm(inner_product(a, b));
  if (!(f <= 1.0 + kNormTolerance)) {
    throw std::domain_error("fidelity: overlap " + std::to_string(f) + " exceeds 1");
  }
  return std::min(f, 1.0);
}

/// sqrt(1 - F) for pure states. 1 - |<a|b>| is taken from the residual
/// ||a - e^{-i arg<a|b>} b||^2 / 2 so near-identical states do not lose
/// precision to cancellation.
inline double trace_distance_pure(const QuantumState& a, const QuantumState& b) {
  const Amplitude ov = inner_product(a, b);
  const double m = std::abs(ov);
  if (m > 1.0 + kNormTolerance) throw std::domain_error("trace distance: overlap exceeds 1");
  const Amplitude phase = m > 0.0 ? std::conj(ov) / m : Amplitude(1.0);
  double residual = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) residual += std::norm(a[i] - phase * b[i]);
  const double one_minus = std::max(0.0, 0.5 * residual);
  return std::sqrt(std::max(0.0, one_minus * (1.0 + std::min(m, 1.0))));
}

/// |F(enc x, enc x2) - F(plain x, plain x2)| for one keyed scheme.
inline double invariance_delta(const PrsCipher& cipher, const FeatureBits& x,
                               const FeatureBits& x2) {
  const double enc = fidelity(cipher.encrypt_state(x), cipher.encrypt_state(x2));
  const double plain = fidelity(cipher.plain(x), cipher.plain(x2));
  return std::abs(enc - plain);
}

inline double invariance_delta(const FeatureBits& x, const FeatureBits& x2,
                               const SchemeParams& params, const TrapdoorKey& k) {
  if (x.size() != x2.size()) throw std::invalid_argument("invariance_delta: width mismatch");
  return invariance_delta(PrsCipher(k, x.size(), params), x, x2);
}

/// Haar-random pure state: normalized vector of iid standard complex Gaussians.
inline QuantumState haar_sample(int n, Rng& rng) {
  check_qubit_count(n);
  std::vector<Amplitude> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    const double re = standard_normal(rng);
    a = Amplitude(re, standard_normal(rng));
  }
  return QuantumState::normalized(n, std::move(amps));
}

/// E|<ψ|φ>|^{2t} for independent Haar states in dimension d: 1 / C(d+t-1, t).
inline double haar_moment(long long d, int t) {
  if (d < 2) throw std::invalid_argument("haar_moment: d must be >= 2");
  if (t < 1) throw std::invalid_argument("haar_moment: t must be >= 1");
  double inv = 1.0;
  for (int j = 1; j <= t; ++j) inv *= static_cast<double>(j) / static_cast<double>(d + j - 1);
  return inv;
}

/// E|<ψ_r|ψ_s>|^{2t} for independent uniformly random binary-phase states in
/// dimension d. The overlap is S/d with S a sum of d Rademacher signs, so the
/// moment is a binomial sum; t = 2 gives (3d^2 - 2d)/d^4.
inline double binary_phase_moment(long long d, int t) {
  if (d < 2) throw std::invalid_argument("binary_phase_moment: d must be >= 2");
  if (t < 1) throw std::invalid_argument("binary_phase_moment: t must be >= 1");
  double acc = 0.0;
  const double dd = static_cast<double>(d);
  for (long long k = 0; k <= d; ++k) {
    const double s = static_cast<double>(2 * k - d) / dd;
    if (s == 0.0) continue;
    const double log_w = std::lgamma(dd + 1) - std::lgamma(static_cast<double>(k) + 1) -
                         std::lgamma(static_cast<double>(d - k) + 1) - dd * std::log(2.0);
    acc += std::exp(log_w + 2.0 * t * std::log(std::abs(s)));
  }
  return acc;
}

/// A named procedure drawing one state per call from the given stream.
struct EnsembleSampler {
  std::string name;
  int n_qubits;
  std::function<QuantumState(Rng&)> sample;

  QuantumState operator()(Rng& rng) const { return sample(rng); }
};

inline EnsembleSampler haar_ensemble(int n) {
  return {"haar", n, [n](Rng& rng) { return haar_sample(n, rng); }};
}

/// |eval_k> for a fresh random key per draw.
inline EnsembleSampler phase_prs_ensemble(int n) {
  return {"phase_prs", n, [n](Rng& rng) { return gen_eval(random_key(rng), n); }};
}

/// Binary-phase state with a truly random predicate r in place of f_k.
inline EnsembleSampler random_function_ensemble(int n) {
  return {"random_function", n, [n](Rng& rng) {
            const double a = std::pow(2.0, -0.5 * n);
            std::vector<Amplitude> amps(std::size_t{1} << n);
            for (auto& v : amps) v = random_bit(rng) ? -a : a;
            return QuantumState(detail::TrustedNorm{}, n, std::move(amps));
          }};
}

/// U_k|0...0> for a fresh random key per draw.
inline EnsembleSampler pru_orbit_ensemble(int n, int layers) {
  return {"pru_orbit", n, [n, layers](Rng& rng) {
            return derive_pru_circuit(random_key(rng), n, layers).apply(zero_state(n));
          }};
}

inline EnsembleSampler fixed_state_ensemble(QuantumState s) {
  const int n = s.num_qubits();
  return {"fixed_state", n, [s = std::move(s)](Rng&) { return s; }};
}

struct MomentEstimate {
  int t = 1;
  double mean = 0.0;
  double std_error = 0.0;
  long long num_samples = 0;
};

/// Mean and standard error of a sample, in index order.
inline std::pair<double, double> mean_and_std_error(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("mean_and_std_error: need >= 2 samples");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(v.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

/// Estimates E|<ψ1|ψ2>|^{2t} with ψ1 ~ e1, ψ2 ~ e2 independent. Pair i draws
/// from its own stream derived from (seed, i), so results do not depend on the
/// worker count.
inline MomentEstimate cross_moment_estimate(const EnsembleSampler& e1, const EnsembleSampler& e2,
                                            int t, long long num_pairs, std::uint64_t seed,
                                            int workers = 1) {
  if (e1.n_qubits != e2.n_qubits) {
    throw std::invalid_argument("cross_moment_estimate: ensembles differ in dimension");
  }
  if (num_pairs < 100) throw std::invalid_argument("cross_moment_estimate: num_pairs must be >= 100");
  if (t < 1) throw std::invalid_argument("cross_moment_estimate: t must be >= 1");
  std::vector<double> values(static_cast<std::size_t>(num_pairs));
  parallel_for(values.size(), workers, [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    const QuantumState a = e1(rng);
    const QuantumState b = e2(rng);
    values[i] = std::pow(fidelity(a, b), t);
  });
  const auto [mean, se] = mean_and_std_error(values);
  return MomentEstimate{t, mean, se, num_pairs};
}

inline MomentEstimate cross_moment_estimate(const EnsembleSampler& e1, const EnsembleSampler& e2,
                                            int t, long long num_pairs, Rng& rng) {
  return cross_moment_estimate(e1, e2, t, num_pairs, rng(), 1);
}

enum class MomentStatistic { MomentT1 = 1, MomentT2 = 2 };

struct DistinguisherResult {
  double advantage = 0.0;
  double std_error = 0.0;
  double threshold = 0.0;
  long long trials_per_ensemble = 0;
};

/// Threshold test on an overlap-moment statistic.
///
/// One trial of ensemble e draws `pairs_per_trial` independent pairs from e
/// and reports the empirical t-moment of their overlaps. The first half of
/// the trials calibrates the threshold at the midpoint of the two ensembles'
/// mean statistics; the held-out half estimates
/// |Pr[guess e2 | e1] - Pr[guess e2 | e2]| and its standard error.
inline DistinguisherResult distinguisher_advantage(const EnsembleSampler& e1,
                                                   const EnsembleSampler& e2,
                                                   MomentStatistic statistic,
                                                   long long num_samples, Rng& rng,
                                                   int pairs_per_trial = 32, int workers = 1) {
  if (num_samples < 100) throw std::invalid_argument("distinguisher_advantage: num_samples must be >= 100");
  if (e1.n_qubits != e2.n_qubits) {
    throw std::invalid_argument("distinguisher_advantage: ensembles differ in dimension");
  }
  if (pairs_per_trial < 1) throw std::invalid_argument("distinguisher_advantage: pairs_per_trial must be >= 1");
  const int t = static_cast<int>(statistic);
  const std::uint64_t seed = rng();
  const auto n_trials = static_cast<std::size_t>(num_samples);
  std::vector<double> s1(n_trials), s2(n_trials);
  auto trial = [&](const EnsembleSampler& e, std::uint64_t stream) {
    Rng r = make_stream(seed, stream);
    double acc = 0.0;
    for (int p = 0; p < pairs_per_trial; ++p) {
      const QuantumState a = e(r);
      acc += std::pow(fidelity(a, e(r)), t);
    }
    return acc / pairs_per_trial;
  };
  parallel_for(2 * n_trials, workers, [&](std::size_t i) {
    if (i < n_trials) {
      s1[i] = trial(e1, 2 * i);
    } else {
      s2[i - n_trials] = trial(e2, 2 * (i - n_trials) + 1);
    }
  });
  const std::size_t cal = n_trials / 2;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < cal; ++i) {
    m1 += s1[i];
    m2 += s2[i];
  }
  m1 /= static_cast<double>(cal);
  m2 /= static_cast<double>(cal);
  const double tau = 0.5 * (m1 + m2);
  const bool upper = m2 >= m1;
  auto guess_e2 = [&](double s) { return upper ? s > tau : s < tau; };
  double hits1 = 0.0, hits2 = 0.0;
  const auto eval = static_cast<double>(n_trials - cal);
  for (std::size_t i = cal; i < n_trials; ++i) {
    hits1 += guess_e2(s1[i]) ? 1.0 : 0.0;
    hits2 += guess_e2(s2[i]) ? 1.0 : 0.0;
  }
  const double p1 = hits1 / eval, p2 = hits2 / eval;
  DistinguisherResult r;
  r.advantage = std::abs(p1 - p2);
  r.std_error = std::sqrt(p1 * (1 - p1) / eval + p2 * (1 - p2) / eval);
  r.threshold = tau;
  r.trials_per_ensemble = num_samples;
  return r;
}

}  // namespace prsguard
