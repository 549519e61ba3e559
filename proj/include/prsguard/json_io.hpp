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

// JSON forms of the library's value types.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "prsguard/genmodel.hpp"
#include "prsguard/metrics.hpp"
#include "prsguard/mia.hpp"
#include "prsguard/prs.hpp"

namespace prsguard {

using Json = nlohmann::json;

/// [[re, im], ...] in index order.
inline Json state_to_json(const QuantumState& s) {
  Json arr = Json::array();
  for (const auto& a : s.amplitudes()) arr.push_back({a.real(), a.imag()});
  return arr;
}

inline QuantumState state_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("state: expected a non-empty array");
  std::vector<Amplitude> amps;
  amps.reserve(j.size());
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("state: entries must be [re, im]");
    amps.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  const std::size_t dim = amps.size();
  if (dim & (dim - 1)) throw std::invalid_argument("state: length is not a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return QuantumState(n, std::move(amps));
}

inline Json params_to_json(const SchemeParams& p) {
  if (const auto* pp = std::get_if<ParamPhaseParams>(&p)) {
    return Json{{"theta", std::vector<double>(pp->theta.values().begin(), pp->theta.values().end())}};
  }
  if (const auto* bp = std::get_if<BasisParams>(&p)) return Json{{"T", bp->T}, {"L", bp->L}};
  return nullptr;
}

inline SchemeParams params_from_json(Scheme scheme, const Json& j) {
  switch (scheme) {
    case Scheme::PhasePRS:
      return PhaseParams{};
    case Scheme::ParamPhasePRS:
      if (!j.is_object() || !j.contains("theta")) throw std::invalid_argument("params: missing theta");
      return ParamPhaseParams{FeatureWeights(j.at("theta").get<std::vector<double>>())};
    case Scheme::BasisPRS:
      if (!j.is_object() || !j.contains("T") || !j.contains("L")) {
        throw std::invalid_argument("params: BasisPRS needs T and L");
      }
      return BasisParams{j.at("T").get<int>(), j.at("L").get<int>()};
  }
  throw std::logic_error("unreachable");
}

inline Json sample_to_json(const EncryptedSample& s) {
  return Json{{"scheme", scheme_name(s.scheme())},
              {"n", s.num_qubits()},
              {"key_fingerprint", detail::to_hex(s.key_fingerprint)},
              {"params", params_to_json(s.params)},
              {"amplitudes", state_to_json(s.state)}};
}

inline EncryptedSample sample_from_json(const Json& j) {
  const Scheme scheme = parse_scheme(j.at("scheme").get<std::string>());
  EncryptedSample s{params_from_json(scheme, j.value("params", Json())),
                    state_from_json(j.at("amplitudes")), {}};
  if (s.state.num_qubits() != j.at("n").get<int>()) {
    throw std::invalid_argument("sample: n does not match amplitude count");
  }
  const auto fp = j.at("key_fingerprint").get<std::string>();
  if (fp.size() != 16) throw std::invalid_argument("sample: key_fingerprint must be 16 hex chars");
  for (std::size_t i = 0; i < 8; ++i) {
    const int hi = detail::hex_value(fp[2 * i]), lo = detail::hex_value(fp[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("sample: bad fingerprint hex");
    s.key_fingerprint[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return s;
}

inline Json weights_to_json(const FeatureWeights& w) {
  return Json(std::vector<double>(w.values().begin(), w.values().end()));
}

/// Non-finite numbers become null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json moment_to_json(const MomentEstimate& m, double reference) {
  const double z = m.std_error > 0 ? (m.mean - reference) / m.std_error : 0.0;
  return Json{{"t", m.t},
              {"mean", m.mean},
              {"std_error", m.std_error},
              {"num_samples", m.num_samples},
              {"reference_value", reference},
              {"z_score", z}};
}

inline Json record_to_json(const StepRecord& r) {
  return Json{{"step", r.step},
              {"disc_loss", r.disc_loss},
              {"gen_loss", r.gen_loss},
              {"mean_real_score", r.mean_real_score},
              {"mean_fake_score", r.mean_fake_score},
              {"pair_fidelities", r.pair_fidelities}};
}

inline Json generator_to_json(const GeneratorParams& g) { return Json{{"logits", g.logits}}; }

inline Json discriminator_to_json(const DiscriminatorParams& d) {
  Json j{{"kind", discriminator_name(d.kind)}};
  if (d.kind == DiscriminatorKind::Variational) {
    j["n"] = d.n_qubits;
    j["depth"] = d.depth;
    j["angles"] = d.angles;
  }
  return j;
}

inline Json transcript_to_json(const GameTranscript& t) {
  Json j{{"trial", t.trial},
         {"hidden_bit", t.hidden_bit},
         {"challenge", t.challenge.to_string()},
         {"observations", t.observations},
         {"threshold", t.threshold},
         {"guess", t.guess},
         {"attack_score", t.attack_score},
         {"key_fingerprint", t.key_fingerprint}};
  if (t.error) j["error"] = *t.error;
  return j;
}

inline Json attack_to_json(const AttackResult& r) {
  return Json{{"advantage", r.advantage},
              {"auc", number_or_null(r.auc)},
              {"trials", r.trials},
              {"failed_trials", r.failed_trials},
              {"ci_half_width", r.ci_half_width},
              {"ci", {r.advantage - r.ci_half_width, r.advantage + r.ci_half_width}}};
}

}  // namespace prsguard
