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

// Membership-inference game. Per trial the challenger draws a training set
// from the pool, flips b, includes the challenge point z iff b = 1, trains
// under a fresh key, and then answers the adversary's discriminator queries on
// plaintexts it encrypts itself. The adversary never holds the key.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prsguard/genmodel.hpp"
#include "prsguard/parallel.hpp"
#include "prsguard/random.hpp"

namespace prsguard {

enum class Adversary { LossThreshold, Oracle, CoinFlip };

inline const char* adversary_name(Adversary a) {
  switch (a) {
    case Adversary::LossThreshold: return "loss_threshold";
    case Adversary::Oracle: return "oracle";
    case Adversary::CoinFlip: return "coin_flip";
  }
  return "?";
}

struct MIAGameConfig {
  int n = 6;
  bool encrypt = true;
  SchemeParams scheme = PhaseParams{};
  std::vector<FeatureBits> pool;
  int train_size = 8;
  TrainConfig train;  // dataset, seed, n, scheme and encrypt are set per trial
  int trials = 200;
  int queries = 16;
  int calibration_points = 16;
  std::uint64_t seed = 0;
  Adversary adversary = Adversary::LossThreshold;

  void validate() const {
    check_qubit_count(n);
    if (train_size < 1) throw std::invalid_argument("MIAGameConfig: train_size must be >= 1");
    if (pool.size() < static_cast<std::size_t>(2 * train_size)) {
      throw std::invalid_argument("MIAGameConfig: pool must hold at least 2 * train_size points");
    }
    for (const auto& x : pool) {
      if (x.size() != n) throw std::invalid_argument("MIAGameConfig: pool entry has wrong width");
    }
    if (trials < 20) throw std::invalid_argument("MIAGameConfig: trials must be >= 20");
    if (queries < 1) throw std::invalid_argument("MIAGameConfig: queries must be >= 1");
    if (calibration_points < 1) {
      throw std::invalid_argument("MIAGameConfig: calibration_points must be >= 1");
    }
    if (train.discriminator != DiscriminatorKind::Variational) {
      throw std::invalid_argument("MIAGameConfig: the adversary queries a VariationalDisc");
    }
  }
};

struct GameTranscript {
  int trial = 0;
  int hidden_bit = 0;
  FeatureBits challenge;
  std::vector<double> observations;
  double threshold = 0.0;
  int guess = 0;
  double attack_score = 0.0;
  std::string key_fingerprint;
  std::optional<std::string> error;

  friend bool operator==(const GameTranscript&, const GameTranscript&) = default;
};

struct AttackResult {
  double advantage = 0.0;
  double auc = 0.5;
  int trials = 0;
  int failed_trials = 0;
  double ci_half_width = 0.0;  // 95%, normal approximation

  bool ci_contains_zero() const { return std::abs(advantage) <= ci_half_width; }
};

struct AttackGuess {
  int guess;
  double score;
};

/// score = mean observation; guess = 1 iff score > threshold (ties guess 0).
inline AttackGuess loss_threshold_attack(const std::vector<double>& observations,
                                         double threshold) {
  if (observations.empty()) throw std::invalid_argument("loss_threshold_attack: no observations");
  double mean = 0.0;
  for (double o : observations) mean += o;
  mean /= static_cast<double>(observations.size());
  return {mean > threshold ? 1 : 0, mean};
}

/// Mann-Whitney AUC: fraction of (positive, negative) pairs ordered correctly,
/// ties counted as 1/2. Computed from midranks.
inline double compute_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  if (labels.size() != scores.size()) throw std::invalid_argument("compute_auc: length mismatch");
  std::size_t pos = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw std::invalid_argument("compute_auc: labels must be 0 or 1");
    pos += static_cast<std::size_t>(l);
  }
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw std::invalid_argument("compute_auc: both classes are required");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) rank_sum += midrank;
    }
    i = j + 1;
  }
  const double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (rank_sum - p * (p + 1) / 2) / (p * q);
}

inline AttackResult summarize_attack(const std::vector<GameTranscript>& transcripts) {
  AttackResult r;
  std::vector<int> labels;
  std::vector<double> scores;
  int correct = 0;
  for (const auto& t : transcripts) {
    if (t.error) {
      ++r.failed_trials;
      continue;
    }
    labels.push_back(t.hidden_bit);
    scores.push_back(t.attack_score);
    correct += t.guess == t.hidden_bit ? 1 : 0;
  }
  r.trials = static_cast<int>(labels.size());
  if (r.trials == 0) throw std::runtime_error("membership game: every trial failed");
  const double acc = static_cast<double>(correct) / r.trials;
  r.advantage = 2.0 * (acc - 0.5);
  r.ci_half_width = 1.96 * 2.0 * std::sqrt(acc * (1.0 - acc) / r.trials);
  try {
    r.auc = compute_auc(labels, scores);
  } catch (const std::invalid_argument&) {
    r.auc = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

/// The fresh key the challenger uses in `trial`; it is the first draw of the
/// trial's stream.
inline TrapdoorKey trial_key(std::uint64_t seed, int trial) {
  Rng rng = make_stream(seed, static_cast<std::uint64_t>(trial));
  return gen_trapdoor(rng());
}

/// Everything the challenger draws for one trial before training.
struct TrialSetup {
  TrapdoorKey key;
  int hidden_bit = 0;
  FeatureBits challenge;
  std::vector<FeatureBits> members;
  std::vector<FeatureBits> reference;  // pool draws other than z, for the threshold
  std::uint64_t train_seed = 0;
};

/// Draws the key, hidden bit, challenge point, training set and reference
/// points from the trial's stream. `rng` is left positioned after the draws.
inline TrialSetup draw_trial(const MIAGameConfig& cfg, int trial, Rng& rng) {
  rng = make_stream(cfg.seed, static_cast<std::uint64_t>(trial));
  TrialSetup s;
  s.key = gen_trapdoor(rng());
  s.hidden_bit = random_bit(rng);

  std::vector<std::size_t> perm(cfg.pool.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = perm.size() - 1; i > 0; --i) {
    std::swap(perm[i], perm[uniform_index(rng, i + 1)]);
  }
  s.challenge = cfg.pool[perm[0]];
  const auto m = static_cast<std::size_t>(cfg.train_size);
  if (s.hidden_bit == 1) s.members.push_back(s.challenge);
  for (std::size_t i = 1; s.members.size() < m; ++i) s.members.push_back(cfg.pool[perm[i]]);
  s.train_seed = rng();
  while (s.reference.size() < static_cast<std::size_t>(cfg.calibration_points)) {
    s.reference.push_back(cfg.pool[perm[1 + uniform_index(rng, perm.size() - 1)]]);
  }
  return s;
}

inline GameTranscript play_trial(const MIAGameConfig& cfg, int trial) {
  Rng rng(0);
  const TrialSetup setup = draw_trial(cfg, trial, rng);
  const TrapdoorKey& key = setup.key;
  GameTranscript t;
  t.trial = trial;
  t.key_fingerprint = key.fingerprint_hex();
  t.hidden_bit = setup.hidden_bit;
  t.challenge = setup.challenge;

  TrainConfig tc = cfg.train;
  tc.n = cfg.n;
  tc.scheme = cfg.scheme;
  tc.encrypt = cfg.encrypt;
  tc.dataset = setup.members;
  tc.seed = setup.train_seed;
  const auto& reference = setup.reference;

  switch (cfg.adversary) {
    case Adversary::Oracle:
      t.guess = t.hidden_bit;
      t.attack_score = t.hidden_bit;
      return t;
    case Adversary::CoinFlip:
      t.guess = random_bit(rng);
      t.attack_score = uniform01(rng);
      return t;
    case Adversary::LossThreshold:
      break;
  }

  try {
    const TrainResult trained = train(tc, key);
    SampleEncoder oracle(key, cfg.n, cfg.scheme, cfg.encrypt);
    auto query = [&](const FeatureBits& x) {
      return detail::score_state(trained.discriminator, oracle(x), tc.shots, rng);
    };
    for (int q = 0; q < cfg.queries; ++q) t.observations.push_back(query(t.challenge));
    std::vector<double> ref_scores;
    for (const auto& x : reference) ref_scores.push_back(query(x));
    std::sort(ref_scores.begin(), ref_scores.end());
    const std::size_t h = ref_scores.size() / 2;
    t.threshold = ref_scores.size() % 2 ? ref_scores[h] : 0.5 * (ref_scores[h - 1] + ref_scores[h]);
    const auto g = loss_threshold_attack(t.observations, t.threshold);
    t.guess = g.guess;
    t.attack_score = g.score;
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  return t;
}

struct GameOutcome {
  std::vector<GameTranscript> transcripts;
  AttackResult result;
};

/// Trials run independently and are folded in trial order.
inline GameOutcome run_game(const MIAGameConfig& cfg, int workers = 1) {
  cfg.validate();
  GameOutcome out;
  out.transcripts.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(out.transcripts.size(), workers, [&](std::size_t i) {
    out.transcripts[i] = play_trial(cfg, static_cast<int>(i));
  });
  out.result = summarize_attack(out.transcripts);
  return out;
}

}  // namespace prsguard
