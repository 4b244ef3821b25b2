// Copyright 2026 The qbclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "qbclab/experiment.hpp"
#include "qbclab/report_io.hpp"

using namespace qbclab;

namespace {

ExperimentConfig small_toy_config() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Attack;
  cfg.fixture = "toy";
  cfg.alpha_values = {0.0, M_PI / 4};
  cfg.trials = 400;
  cfg.seed = 9;
  cfg.mode = RunMode::Both;
  return cfg;
}

int count_columns(const std::string& line) {
  int n = 1;
  for (char c : line) {
    if (c == ',') ++n;
  }
  return n;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("json round trip is the identity") {
  const Report report = run_experiment(small_toy_config());
  const std::string text = report_to_json(report);
  const Report back = report_from_json(text);
  CHECK(back == report);
  CHECK(report_to_json(back) == text);
}

TEST_CASE("csv: header-only for an empty sweep, one row per point otherwise") {
  Report empty;
  empty.config = small_toy_config();
  const auto empty_lines = lines_of(report_to_csv(empty));
  REQUIRE(empty_lines.size() == 1);

  const Report report = run_experiment(small_toy_config());
  const auto lines = lines_of(report_to_csv(report));
  REQUIRE(lines.size() == 1 + report.points.size());
  const int header_cols = count_columns(lines[0]);
  for (size_t i = 1; i < lines.size(); ++i) CHECK(count_columns(lines[i]) == header_cols);
  CHECK(lines[0].rfind("schema_version,", 0) == 0);
  CHECK(lines[1].rfind("1,toy,alpha,", 0) == 0);
}

TEST_CASE("seed determinism: identical configs produce identical bytes") {
  const Report a = run_experiment(small_toy_config());
  const Report b = run_experiment(small_toy_config());
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_to_csv(a) == report_to_csv(b));

  ExperimentConfig reseeded = small_toy_config();
  reseeded.seed = 10;
  const Report c = run_experiment(reseeded);
  CHECK(report_to_json(c) != report_to_json(a));
}

TEST_CASE("worker count never changes the report") {
  ExperimentConfig cfg = small_toy_config();
  cfg.jobs = 1;
  const Report a = run_experiment(cfg);
  cfg.jobs = 3;
  const Report b = run_experiment(cfg);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_to_csv(a) == report_to_csv(b));
}

TEST_CASE("monte carlo fields carry standard errors, enumerated ones are exact") {
  const Report report = run_experiment(small_toy_config());
  for (const auto& p : report.points) {
    REQUIRE(p.attack_success_uncond.present);
    CHECK(p.attack_success_uncond.exact);
    CHECK(p.attack_success_uncond.stderror == 0.0);
    REQUIRE(p.mc_attack_success_uncond.present);
    CHECK_FALSE(p.mc_attack_success_uncond.exact);
    CHECK(p.mc_attack_success_uncond.stderror >= 0.0);
  }
}

TEST_CASE("audit experiment values on the leaky fixture") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Audit;
  cfg.fixture = "toy";
  cfg.alpha_values = {M_PI / 4};
  cfg.mode = RunMode::Enumerate;
  const Report report = run_experiment(cfg);
  REQUIRE(report.points.size() == 1);
  const PointRecord& p = report.points[0];
  CHECK(p.concealment_fidelity.value == doctest::Approx(std::cos(M_PI / 4)).epsilon(1e-9));
  CHECK(p.fprime.value == doctest::Approx(std::cos(M_PI / 4)).epsilon(1e-9));
  CHECK(p.honest_bot_rate.value == 0.0);
}

TEST_CASE("oracle experiment flags agreement") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Oracle;
  cfg.fixture = "bb84";
  cfg.n_values = {1, 2};
  cfg.trials = 800;
  cfg.seed = 4;
  const Report report = run_experiment(cfg);
  for (const auto& p : report.points) {
    CHECK(p.mc_checked);
    CHECK(p.mc_within_band);
    CHECK(p.honest_bot_rate.value ==
          doctest::Approx(std::pow(0.75, p.param_value)).epsilon(1e-9));
  }
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_toy_config();
  cfg.fixture = "nope";
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = small_toy_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  CHECK_THROWS_AS(run_mode_from_string("sometimes"), ConfigError);
  CHECK_THROWS_AS(report_format_from_string("yaml"), ConfigError);
}

TEST_CASE("emit_report writes the requested files") {
  const Report report = run_experiment(small_toy_config());
  const std::string dir = "harness_test_out";
  const auto paths = emit_report(report, dir, ReportFormat::Both);
  REQUIRE(paths.size() == 2);
  const Report back = report_from_json([&] {
    std::ifstream in(paths[0], std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }());
  CHECK(back == report);
}
