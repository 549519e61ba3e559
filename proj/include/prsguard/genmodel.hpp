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

// Adversarial training on encrypted samples: a product-Bernoulli generator
// over bitstrings and two discriminators that only ever see encoded (and, by
// default, encrypted) states.
//
//   FidelityDisc     scores a (real, fake) pair by |<enc real|enc fake>|^2
//   VariationalDisc  scores one state by (1 + <Z_0>)/2 after D layers of
//                    per-qubit RY, RZ and a CZ ring

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prsguard/circuit.hpp"
#include "prsguard/metrics.hpp"
#include "prsguard/prs.hpp"
#include "prsguard/random.hpp"

namespace prsguard {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct GeneratorParams {
  std::vector<double> logits;

  int num_bits() const { return static_cast<int>(logits.size()); }
  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

/// Bit i is 1 with probability sigmoid(logit_i), independently.
inline FeatureBits generator_sample(const GeneratorParams& g, Rng& rng) {
  std::vector<std::uint8_t> bits(g.logits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!std::isfinite(g.logits[i])) throw std::invalid_argument("generator_sample: non-finite logit");
    bits[i] = uniform01(rng) < sigmoid(g.logits[i]) ? 1 : 0;
  }
  return FeatureBits(std::move(bits));
}

enum class DiscriminatorKind { Fidelity, Variational };

inline const char* discriminator_name(DiscriminatorKind k) {
  return k == DiscriminatorKind::Fidelity ? "fidelity" : "variational";
}

struct DiscriminatorParams {
  DiscriminatorKind kind = DiscriminatorKind::Variational;
  int n_qubits = 0;
  int depth = 0;
  // Layout: angles[(layer * n + qubit) * 2 + {0: RY, 1: RZ}].
  std::vector<double> angles;

  static DiscriminatorParams fidelity() { return {DiscriminatorKind::Fidelity, 0, 0, {}}; }

  static DiscriminatorParams variational(int n, int depth, std::vector<double> angles) {
    check_qubit_count(n);
    if (depth < 1) throw std::invalid_argument("VariationalDisc: depth must be >= 1");
    if (angles.size() != static_cast<std::size_t>(2 * n * depth)) {
      throw std::invalid_argument("VariationalDisc: expected " + std::to_string(2 * n * depth) +
                                  " angles, got " + std::to_string(angles.size()));
    }
    return {DiscriminatorKind::Variational, n, depth, std::move(angles)};
  }

  static DiscriminatorParams variational_random(int n, int depth, Rng& rng, double scale = 0.1) {
    std::vector<double> a(static_cast<std::size_t>(2 * n * depth));
    for (auto& v : a) v = scale * (2.0 * uniform01(rng) - 1.0);
    return variational(n, depth, std::move(a));
  }

  friend bool operator==(const DiscriminatorParams&, const DiscriminatorParams&) = default;
};

inline Circuit discriminator_circuit(const DiscriminatorParams& d) {
  if (d.kind != DiscriminatorKind::Variational) {
    throw std::invalid_argument("discriminator_circuit: FidelityDisc has no circuit");
  }
  Circuit c(d.n_qubits);
  const auto ring = cz_ring_pairs(d.n_qubits);
  for (int l = 0; l < d.depth; ++l) {
    for (int q = 0; q < d.n_qubits; ++q) {
      const std::size_t base = static_cast<std::size_t>((l * d.n_qubits + q) * 2);
      c.add_gate(q, SingleQubitGate::ry(d.angles[base]));
      c.add_gate(q, SingleQubitGate::rz(d.angles[base + 1]));
    }
    for (auto [a, b] : ring) c.add_cz(a, b);
  }
  return c;
}

/// Probability that qubit 0 reads 0, i.e. (1 + <Z_0>)/2.
inline double qubit0_zero_probability(std::span<const Amplitude> amps) {
  double p0 = 0.0;
  for (std::size_t y = 0; y < amps.size() / 2; ++y) p0 += std::norm(amps[y]);
  return std::clamp(p0, 0.0, 1.0);
}

inline double variational_score(const DiscriminatorParams& d, const QuantumState& s) {
  if (s.num_qubits() != d.n_qubits) {
    throw std::invalid_argument("VariationalDisc: state has wrong number of qubits");
  }
  auto amps = detail::copy_amplitudes(s);
  discriminator_circuit(d).apply_in_place(amps);
  return qubit0_zero_probability(amps);
}

/// Score estimated from `shots` simulated measurements of qubit 0.
inline double variational_score_shots(const DiscriminatorParams& d, const QuantumState& s,
                                      int shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("variational_score_shots: shots must be >= 1");
  const double p = variational_score(d, s);
  int zeros = 0;
  for (int i = 0; i < shots; ++i) zeros += uniform01(rng) < p ? 1 : 0;
  return static_cast<double>(zeros) / shots;
}

inline double discriminator_score(const DiscriminatorParams& d, const QuantumState& s) {
  if (d.kind != DiscriminatorKind::Variational) {
    throw std::invalid_argument("FidelityDisc scores pairs, not single states");
  }
  return variational_score(d, s);
}

inline double discriminator_score(const DiscriminatorParams& d, const QuantumState& a,
                                  const QuantumState& b) {
  if (d.kind != DiscriminatorKind::Fidelity) {
    throw std::invalid_argument("VariationalDisc scores single states, not pairs");
  }
  return fidelity(a, b);
}

/// d score / d angle_j = [score(angle_j + π/2) - score(angle_j - π/2)] / 2.
inline std::vector<double> score_gradient_parameter_shift(const DiscriminatorParams& d,
                                                          const QuantumState& s) {
  std::vector<double> grad(d.angles.size());
  DiscriminatorParams shifted = d;
  constexpr double kShift = std::numbers::pi / 2;
  for (std::size_t j = 0; j < d.angles.size(); ++j) {
    shifted.angles[j] = d.angles[j] + kShift;
    const double plus = variational_score(shifted, s);
    shifted.angles[j] = d.angles[j] - kShift;
    const double minus = variational_score(shifted, s);
    shifted.angles[j] = d.angles[j];
    grad[j] = 0.5 * (plus - minus);
  }
  return grad;
}

inline std::vector<double> score_gradient_finite_difference(const DiscriminatorParams& d,
                                                            const QuantumState& s, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite difference step must be > 0");
  std::vector<double> grad(d.angles.size());
  DiscriminatorParams shifted = d;
  for (std::size_t j = 0; j < d.angles.size(); ++j) {
    shifted.angles[j] = d.angles[j] + h;
    const double plus = variational_score(shifted, s);
    shifted.angles[j] = d.angles[j] - h;
    const double minus = variational_score(shifted, s);
    shifted.angles[j] = d.angles[j];
    grad[j] = (plus - minus) / (2 * h);
  }
  return grad;
}

enum class GradientMethod { ParameterShift, FiniteDifference };

struct TrainConfig {
  SchemeParams scheme = PhaseParams{};
  bool encrypt = true;  // false runs the plaintext baseline
  int n = 4;
  int batch_size = 8;
  int steps = 100;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  std::vector<FeatureBits> dataset;
  DiscriminatorKind discriminator = DiscriminatorKind::Variational;
  int depth = 1;
  GradientMethod gradient = GradientMethod::ParameterShift;
  double fd_step = 1e-5;
  int shots = 0;  // 0 = exact expectation values
  bool rekey_per_batch = false;

  void validate() const {
    check_qubit_count(n);
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (steps < 0) throw std::invalid_argument("TrainConfig: steps must be >= 0");
    if (!std::isfinite(learning_rate) || learning_rate < 0) {
      throw std::invalid_argument("TrainConfig: learning_rate must be finite and >= 0");
    }
    if (dataset.empty()) throw std::invalid_argument("TrainConfig: dataset is empty");
    for (const auto& x : dataset) {
      if (x.size() != n) throw std::invalid_argument("TrainConfig: dataset entry has wrong width");
    }
    if (depth < 1) throw std::invalid_argument("TrainConfig: depth must be >= 1");
    if (gradient == GradientMethod::FiniteDifference && !(fd_step > 0)) {
      throw std::invalid_argument("TrainConfig: fd_step must be > 0");
    }
    if (shots < 0) throw std::invalid_argument("TrainConfig: shots must be >= 0");
    if (const auto* p = std::get_if<ParamPhaseParams>(&scheme); p && p->theta.size() != n) {
      throw std::invalid_argument("TrainConfig: theta length must equal n");
    }
  }
};

struct StepRecord {
  int step = 0;
  double disc_loss = 0.0;
  double gen_loss = 0.0;
  double mean_real_score = 0.0;
  double mean_fake_score = 0.0;
  // FidelityDisc score of each (real_i, fake_i) pair in the batch.
  std::vector<double> pair_fidelities;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

using TrainHistory = std::vector<StepRecord>;

/// Encodes bitstrings for one training key, memoized per basis index.
class SampleEncoder {
 public:
  SampleEncoder(const TrapdoorKey& k, int n, const SchemeParams& params, bool encrypt)
      : cipher_(k, n, params), encrypt_(encrypt) {}

  const QuantumState& operator()(const FeatureBits& x) {
    const auto idx = x.to_index();
    if (auto it = cache_.find(idx); it != cache_.end()) return it->second;
    auto s = encrypt_ ? cipher_.encrypt_state(x) : cipher_.plain(x);
    return cache_.emplace(idx, std::move(s)).first->second;
  }

  const PrsCipher& cipher() const { return cipher_; }
  bool encrypts() const { return encrypt_; }

 private:
  PrsCipher cipher_;
  bool encrypt_;
  std::unordered_map<std::uint64_t, QuantumState> cache_;
};

inline constexpr double kLogClampMin = 1e-12;

inline double clamped_log(double p) { return std::log(std::clamp(p, kLogClampMin, 1.0)); }

/// d(-log clamp(p))/dp, zero where the clamp is active.
inline double neg_log_derivative(double p) {
  return (p < kLogClampMin || p > 1.0) ? 0.0 : -1.0 / p;
}

struct TrainStepResult {
  GeneratorParams generator;
  DiscriminatorParams discriminator;
  StepRecord record;
};

namespace detail {

inline double score_state(const DiscriminatorParams& d, const QuantumState& s, int shots,
                          Rng& rng) {
  return shots > 0 ? variational_score_shots(d, s, shots, rng) : variational_score(d, s);
}

inline std::vector<double> score_gradient(const DiscriminatorParams& d, const QuantumState& s,
                                          const TrainConfig& cfg) {
  return cfg.gradient == GradientMethod::ParameterShift
             ? score_gradient_parameter_shift(d, s)
             : score_gradient_finite_difference(d, s, cfg.fd_step);
}

/// Score-function estimate of d E[loss] / d logits with a batch-mean baseline.
inline std::vector<double> generator_gradient(const GeneratorParams& g,
                                              const std::vector<FeatureBits>& fake,
                                              const std::vector<double>& losses) {
  double baseline = 0.0;
  for (double l : losses) baseline += l;
  baseline /= static_cast<double>(losses.size());
  std::vector<double> grad(g.logits.size(), 0.0);
  for (std::size_t b = 0; b < fake.size(); ++b) {
    const double adv = losses[b] - baseline;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      grad[i] += adv * (static_cast<double>(fake[b][static_cast<int>(i)]) - sigmoid(g.logits[i]));
    }
  }
  for (auto& v : grad) v /= static_cast<double>(fake.size());
  return grad;
}

inline void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::runtime_error(std::string("non-finite ") + what + " (diverged step size?)");
  }
}

}  // namespace detail

/// One alternating update: discriminator descends disc_loss, then the
/// generator descends the non-saturating gen_loss against the updated
/// discriminator. The record reports losses and scores before the update.
inline TrainStepResult train_step(const GeneratorParams& g, const DiscriminatorParams& d,
                                  const TrainConfig& cfg, SampleEncoder& encoder, int step,
                                  Rng& rng) {
  const auto B = static_cast<std::size_t>(cfg.batch_size);
  std::vector<FeatureBits> real, fake;
  real.reserve(B);
  fake.reserve(B);
  for (std::size_t b = 0; b < B; ++b) {
    real.push_back(cfg.dataset[uniform_index(rng, cfg.dataset.size())]);
  }
  for (std::size_t b = 0; b < B; ++b) fake.push_back(generator_sample(g, rng));

  std::vector<const QuantumState*> real_s, fake_s;
  for (const auto& x : real) real_s.push_back(&encoder(x));
  for (const auto& x : fake) fake_s.push_back(&encoder(x));

  TrainStepResult out{g, d, StepRecord{}};
  StepRecord& rec = out.record;
  rec.step = step;
  rec.pair_fidelities.reserve(B);
  for (std::size_t b = 0; b < B; ++b) rec.pair_fidelities.push_back(fidelity(*real_s[b], *fake_s[b]));

  std::vector<double> gen_losses(B);
  if (d.kind == DiscriminatorKind::Fidelity) {
    double disc = 0.0, gen = 0.0, real_score = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
      const double f = rec.pair_fidelities[b];
      disc -= clamped_log(1.0 - f);
      gen_losses[b] = -clamped_log(f);
      gen += gen_losses[b];
      real_score += fidelity(*real_s[b], *real_s[(b + 1) % B]);
    }
    rec.disc_loss = disc / static_cast<double>(B);
    rec.gen_loss = gen / static_cast<double>(B);
    rec.mean_real_score = real_score / static_cast<double>(B);
    double fake_score = 0.0;
    for (double f : rec.pair_fidelities) fake_score += f;
    rec.mean_fake_score = fake_score / static_cast<double>(B);
  } else {
    if (d.n_qubits != cfg.n) throw std::invalid_argument("train_step: discriminator width mismatch");
    std::vector<double> sr(B), sf(B);
    for (std::size_t b = 0; b < B; ++b) sr[b] = detail::score_state(d, *real_s[b], cfg.shots, rng);
    for (std::size_t b = 0; b < B; ++b) sf[b] = detail::score_state(d, *fake_s[b], cfg.shots, rng);
    double disc = 0.0, gen = 0.0;
    std::vector<double> grad(d.angles.size(), 0.0);
    for (std::size_t b = 0; b < B; ++b) {
      disc -= clamped_log(sr[b]) + clamped_log(1.0 - sf[b]);
      gen -= clamped_log(sf[b]);
      const double wr = neg_log_derivative(sr[b]);
      const double wf = -neg_log_derivative(1.0 - sf[b]);
      if (wr != 0.0) {
        const auto gr = detail::score_gradient(d, *real_s[b], cfg);
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += wr * gr[j];
      }
      if (wf != 0.0) {
        const auto gf = detail::score_gradient(d, *fake_s[b], cfg);
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += wf * gf[j];
      }
    }
    rec.disc_loss = disc / static_cast<double>(B);
    rec.gen_loss = gen / static_cast<double>(B);
    double mr = 0.0, mf = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
      mr += sr[b];
      mf += sf[b];
    }
    rec.mean_real_score = mr / static_cast<double>(B);
    rec.mean_fake_score = mf / static_cast<double>(B);
    for (std::size_t j = 0; j < grad.size(); ++j) {
      out.discriminator.angles[j] -= cfg.learning_rate * grad[j] / static_cast<double>(B);
    }
    for (std::size_t b = 0; b < B; ++b) {
      gen_losses[b] = -clamped_log(detail::score_state(out.discriminator, *fake_s[b], cfg.shots, rng));
    }
  }
  detail::check_finite(rec.disc_loss, "discriminator loss");
  detail::check_finite(rec.gen_loss, "generator loss");

  const auto gg = detail::generator_gradient(g, fake, gen_losses);
  for (std::size_t i = 0; i < gg.size(); ++i) out.generator.logits[i] -= cfg.learning_rate * gg[i];
  for (double v : out.generator.logits) detail::check_finite(v, "generator logit");
  for (double v : out.discriminator.angles) detail::check_finite(v, "discriminator angle");
  return out;
}

inline TrainStepResult train_step(const GeneratorParams& g, const DiscriminatorParams& d,
                                  const TrainConfig& cfg, const TrapdoorKey& k, Rng& rng,
                                  int step = 0) {
  SampleEncoder encoder(k, cfg.n, cfg.scheme, cfg.encrypt);
  return train_step(g, d, cfg, encoder, step, rng);
}

struct TrainResult {
  TrainHistory history;
  GeneratorParams generator;
  DiscriminatorParams discriminator;
};

/// Key used for batch `step` when rekeying per batch; the run key otherwise.
inline TrapdoorKey batch_key(const TrapdoorKey& run_key, int step) {
  std::uint64_t base = 0;
  for (auto b : run_key.fingerprint()) base = (base << 8) | b;
  return gen_trapdoor(derive_seed(base, static_cast<std::uint64_t>(step)));
}

inline DiscriminatorParams initial_discriminator(const TrainConfig& cfg, Rng& rng) {
  if (cfg.discriminator == DiscriminatorKind::Fidelity) return DiscriminatorParams::fidelity();
  return DiscriminatorParams::variational_random(cfg.n, cfg.depth, rng);
}

/// Runs cfg.steps alternating updates from a zero-logit generator.
/// `observer`, when set, sees every record as it is produced.
template <typename Observer = std::nullptr_t>
TrainResult train(const TrainConfig& cfg, const TrapdoorKey& k, Observer&& observer = nullptr) {
  cfg.validate();
  Rng rng(cfg.seed);
  TrainResult result;
  result.generator.logits.assign(static_cast<std::size_t>(cfg.n), 0.0);
  result.discriminator = initial_discriminator(cfg, rng);
  std::optional<SampleEncoder> encoder;
  encoder.emplace(k, cfg.n, cfg.scheme, cfg.encrypt);
  result.history.reserve(static_cast<std::size_t>(cfg.steps));
  for (int step = 0; step < cfg.steps; ++step) {
    if (cfg.rekey_per_batch && step > 0) {
      encoder.emplace(batch_key(k, step), cfg.n, cfg.scheme, cfg.encrypt);
    }
    auto r = train_step(result.generator, result.discriminator, cfg, *encoder, step, rng);
    result.generator = std::move(r.generator);
    result.discriminator = std::move(r.discriminator);
    if constexpr (!std::is_same_v<std::decay_t<Observer>, std::nullptr_t>) observer(r.record);
    result.history.push_back(std::move(r.record));
  }
  return result;
}

}  // namespace prsguard
