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

// Drives the prsguard executable end to end through std::system.

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kConfig = 2, kRuntime = 3;

struct Sandbox {
  fs::path dir;
  explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("prsguard_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  fs::path write_config(const std::string& file, const json& j) const {
    const auto p = dir / file;
    std::ofstream(p) << j.dump(2);
    return p;
  }
};

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PRSGUARD_CLI) + " " + args + " > " + (log.string() + ".out") + " 2> " +
                          (log.string() + ".err");
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("encrypt then invert round-trips every input", "[cli]") {
  Sandbox box("roundtrip");
  const std::vector<std::string> xs = {"0000", "1011", "1111", "0110"};
  for (std::string scheme : {"PhasePRS", "BasisPRS"}) {
    const auto enc_dir = box.dir / (scheme + "_enc");
    const auto cfg = box.write_config(scheme + ".json", {{"command", "encrypt"},
                                                          {"n", 4},
                                                          {"scheme", scheme},
                                                          {"inputs", xs},
                                                          {"seed", 12},
                                                          {"output", enc_dir.string()}});
    REQUIRE(run("encrypt --config " + cfg.string(), box.dir / "enc") == kOk);
    CHECK(slurp(box.dir / "enc.out").rfind("key_fingerprint ", 0) == 0);
    std::vector<std::string> files;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::string name = "sample_000" + std::to_string(i) + ".json";
      files.push_back((enc_dir / name).string());
      const auto sample = load(enc_dir / name);
      CHECK(sample.at("scheme") == scheme);
      CHECK(sample.at("provenance").contains("config_hash"));
      CHECK(sample.at("provenance").at("seed") == 12);
      CHECK(sample.at("provenance").contains("version"));
    }
    const auto inv_dir = box.dir / (scheme + "_inv");
    const auto icfg = box.write_config(scheme + "_inv.json", {{"command", "invert"},
                                                               {"inputs", files},
                                                               {"seed", 12},
                                                               {"output", inv_dir.string()}});
    REQUIRE(run("invert --config " + icfg.string(), box.dir / "inv") == kOk);
    const auto results = load(inv_dir / "inverted.json").at("results");
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(results[i].at("bits") == xs[i]);

    // Wrong key: nothing decodes.
    REQUIRE(run("invert --config " + icfg.string() + " --seed 13", box.dir / "inv") == kRuntime);
  }
}

TEST_CASE("same config and seed give byte-identical outputs", "[cli]") {
  Sandbox box("determinism");
  const json base = {{"command", "encrypt"},
                     {"n", 3},
                     {"scheme", "ParamPhasePRS"},
                     {"theta", {0.5, 1.5, 2.5}},
                     {"inputs", {"101", "011"}},
                     {"seed", 5},
                     {"output", "unused"}};
  const auto cfg = box.write_config("c.json", base);
  for (std::string run_name : {"a", "b"}) {
    REQUIRE(run("encrypt --config " + cfg.string() + " --output " + (box.dir / run_name).string(),
                box.dir / run_name) == kOk);
  }
  for (auto f : {"sample_0000.json", "sample_0001.json"}) {
    CHECK(slurp(box.dir / "a" / f) == slurp(box.dir / "b" / f));
  }
}

TEST_CASE("config errors exit with code 2", "[cli]") {
  Sandbox box("errors");
  const auto out = (box.dir / "out").string();

  SECTION("missing theta names the field") {
    const auto cfg = box.write_config("c.json", {{"command", "encrypt"},
                                                 {"n", 2},
                                                 {"scheme", "ParamPhasePRS"},
                                                 {"inputs", {"01"}},
                                                 {"seed", 1},
                                                 {"output", out}});
    CHECK(run("encrypt --config " + cfg.string(), box.dir / "log") == kConfig);
    CHECK(slurp(box.dir / "log.err").find("config.theta") != std::string::npos);
  }
  SECTION("unknown field") {
    const auto cfg = box.write_config("c.json", {{"command", "encrypt"},
                                                 {"n", 2},
                                                 {"scheme", "PhasePRS"},
                                                 {"inputs", {"01"}},
                                                 {"seed", 1},
                                                 {"colour", "blue"},
                                                 {"output", out}});
    CHECK(run("encrypt --config " + cfg.string(), box.dir / "log") == kConfig);
    CHECK(slurp(box.dir / "log.err").find("colour") != std::string::npos);
  }
  SECTION("wrong type") {
    const auto cfg = box.write_config("c.json", {{"command", "encrypt"},
                                                 {"n", "two"},
                                                 {"scheme", "PhasePRS"},
                                                 {"inputs", {"01"}},
                                                 {"seed", 1},
                                                 {"output", out}});
    CHECK(run("encrypt --config " + cfg.string(), box.dir / "log") == kConfig);
  }
  SECTION("no key and no seed") {
    const auto cfg = box.write_config("c.json", {{"command", "encrypt"},
                                                 {"n", 2},
                                                 {"scheme", "PhasePRS"},
                                                 {"inputs", {"01"}},
                                                 {"output", out}});
    CHECK(run("encrypt --config " + cfg.string(), box.dir / "log") == kConfig);
    CHECK(run("encrypt --config " + cfg.string() + " --key " + std::string(64, 'a'), box.dir / "log") == kOk);
    CHECK(run("encrypt --config " + cfg.string() + " --key abc", box.dir / "log") == kConfig);
  }
  SECTION("input of the wrong width") {
    const auto cfg = box.write_config("c.json", {{"command", "encrypt"},
                                                 {"n", 2},
                                                 {"scheme", "PhasePRS"},
                                                 {"inputs", {"011"}},
                                                 {"seed", 1},
                                                 {"output", out}});
    CHECK(run("encrypt --config " + cfg.string(), box.dir / "log") == kConfig);
  }
  SECTION("config meant for another command") {
    const auto cfg = box.write_config("c.json", {{"command", "mia"}, {"n", 2}, {"seed", 1}, {"output", out}});
    CHECK(run("encrypt --config " + cfg.string(), box.dir / "log") == kConfig);
  }
  SECTION("unreadable or malformed config") {
    CHECK(run("encrypt --config " + (box.dir / "missing.json").string(), box.dir / "log") == kConfig);
    std::ofstream(box.dir / "bad.json") << "{not json";
    CHECK(run("encrypt --config " + (box.dir / "bad.json").string(), box.dir / "log") == kConfig);
  }
  SECTION("command-line parse errors") {
    CHECK(run("encrypt", box.dir / "log") == kConfig);
    CHECK(run("frobnicate --config x", box.dir / "log") == kConfig);
  }
}

TEST_CASE("invariance command passes at n = 8", "[cli]") {
  Sandbox box("invariance");
  const auto cfg = box.write_config(
      "c.json", {{"command", "invariance"}, {"n", 8}, {"seed", 3}, {"triples", 1000}, {"output", box.dir.string()}});
  REQUIRE(run("invariance --config " + cfg.string(), box.dir / "log") == kOk);
  const auto j = load(box.dir / "invariance.json");
  for (const auto& s : j.at("schemes")) {
    CHECK(s.at("max_delta").get<double>() <= 1e-9);
    CHECK(s.at("pass") == true);
  }
  CHECK(fs::exists(box.dir / "invariance.csv"));
}

TEST_CASE("prs-stats reports a z-score within 3 for t = 1", "[cli]") {
  Sandbox box("stats");
  const auto cfg = box.write_config("c.json", {{"command", "prs-stats"},
                                               {"n", 6},
                                               {"t", 1},
                                               {"num_pairs", 2000},
                                               {"seed", 4},
                                               {"output", box.dir.string()}});
  REQUIRE(run("prs-stats --config " + cfg.string() + " --workers 2", box.dir / "log") == kOk);
  const auto j = load(box.dir / "prs_stats.json");
  const auto& m = j.at("moments").at(0);
  CHECK(std::abs(m.at("z_score").get<double>()) <= 3.0);
  CHECK(m.at("reference_value").get<double>() == Catch::Approx(1.0 / 64));
  CHECK(j.at("provenance").contains("config_hash"));
  CHECK(j.at("reference") == "binary_phase");
}

TEST_CASE("a failed acceptance check exits with code 4", "[cli]") {
  // Binary-phase states have a larger 4th overlap moment than Haar states.
  Sandbox box("stats_fail");
  const auto cfg = box.write_config("c.json", {{"command", "prs-stats"},
                                               {"n", 6},
                                               {"t", {2}},
                                               {"reference", "haar"},
                                               {"num_pairs", 20000},
                                               {"seed", 4},
                                               {"output", box.dir.string()}});
  CHECK(run("prs-stats --config " + cfg.string(), box.dir / "log") == 4);
  const auto j = load(box.dir / "prs_stats.json");
  CHECK(j.at("pass") == false);
  CHECK(j.at("moments").at(0).at("z_score").get<double>() > 3.0);
}

TEST_CASE("train writes a history and parameters", "[cli]") {
  Sandbox box("train");
  const auto cfg = box.write_config("c.json", {{"command", "train"},
                                               {"n", 4},
                                               {"scheme", "BasisPRS"},
                                               {"dataset", {"1011", "0011"}},
                                               {"steps", 12},
                                               {"discriminator", "fidelity"},
                                               {"check_invariance", true},
                                               {"seed", 8},
                                               {"output", box.dir.string()}});
  REQUIRE(run("train --config " + cfg.string(), box.dir / "log") == kOk);
  std::ifstream hist(box.dir / "history.jsonl");
  int lines = 0;
  for (std::string line; std::getline(hist, line);) {
    const auto rec = json::parse(line);
    CHECK(rec.at("step") == lines);
    ++lines;
  }
  CHECK(lines == 12);
  const auto params = load(box.dir / "params.json");
  CHECK(params.at("generator").at("logits").size() == 4);
  CHECK(params.at("invariance_check").at("pass") == true);

  auto j = load(cfg);
  j["discriminator"] = "variational";
  const auto bad = box.write_config("v.json", j);
  CHECK(run("train --config " + bad.string(), box.dir / "log") == kConfig);
  j["check_invariance"] = false;
  const auto ok = box.write_config("v2.json", j);
  CHECK(run("train --config " + ok.string(), box.dir / "log") == kOk);
}

TEST_CASE("mia smoke run produces a well-formed result", "[cli]") {
  Sandbox box("mia");
  const auto cfg = box.write_config("c.json", {{"command", "mia"},
                                               {"n", 4},
                                               {"trials", 20},
                                               {"train_size", 4},
                                               {"train", {{"steps", 4}, {"batch_size", 4}}},
                                               {"seed", 9},
                                               {"output", box.dir.string()}});
  const int code = run("mia --config " + cfg.string() + " --workers 2", box.dir / "log");
  CHECK((code == kOk || code == 4));
  const auto j = load(box.dir / "mia.json");
  for (std::string arm : {"encrypted", "plaintext"}) {
    for (std::string adv : {"loss_threshold", "oracle", "coin_flip"}) {
      const auto& r = j.at("arms").at(arm).at(adv);
      CHECK(r.at("trials") == 20);
      CHECK(r.at("advantage").get<double>() >= -1.0);
      CHECK(r.at("advantage").get<double>() <= 1.0);
      CHECK(r.at("ci").size() == 2);
    }
  }
  CHECK(j.at("arms").at("encrypted").at("oracle").at("advantage") == 1.0);
  CHECK(fs::exists(box.dir / "mia.csv"));
}
