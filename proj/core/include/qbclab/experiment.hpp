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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbclab/protocol.hpp"

namespace qbclab {

enum class RunMode : std::uint8_t { Enumerate, MonteCarlo, Both };
enum class ExperimentKind : std::uint8_t { Audit, Attack, Oracle };

std::string to_string(RunMode m);
std::string to_string(ExperimentKind k);
RunMode run_mode_from_string(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Audit;
  std::string fixture = "bb84";       // "bb84" or "toy"
  std::vector<int> n_values;          // bb84 sweep (defaults to 1..8 for MC-capable kinds)
  std::vector<double> alpha_values;   // toy sweep
  long trials = 10000;
  std::uint64_t seed = 1;
  RunMode mode = RunMode::Both;
  int register_cap = kDefaultRegisterCap;
  long branch_cap = 1L << 20;
  double sigma_band = 4.0;

  // execution details: never serialized, never affect results or bytes
  std::string out_dir = ".";
  int jobs = 1;

  bool operator==(const ExperimentConfig& o) const {
    return kind == o.kind && fixture == o.fixture && n_values == o.n_values &&
           alpha_values == o.alpha_values && trials == o.trials && seed == o.seed &&
           mode == o.mode && register_cap == o.register_cap && branch_cap == o.branch_cap &&
           sigma_band == o.sigma_band;
  }
};

/// A reported number: either exact (from exhaustive enumeration) or a Monte
/// Carlo estimate carrying its standard error.
struct Measured {
  bool present = false;
  bool exact = false;
  double value = 0.0;
  double stderror = 0.0;

  static Measured exact_value(double v);
  static Measured estimate(double v, double se);

  bool operator==(const Measured&) const = default;
};

struct PointRecord {
  std::string fixture;
  std::string param_name;  // "n" or "alpha"
  double param_value = 0.0;

  Measured concealment_fidelity;    // E[F] over Bob's view keys
  Measured key_marginal_distance;   // total variation between view-key marginals
  Measured trace_distance_b;        // Bob-side reductions of the two honest commits
  Measured fprime;                  // expected fidelity under withheld commits
  Measured honest_bot_rate;
  Measured mc_honest_bot_rate;

  Measured attack_success_uncond;
  Measured attack_success_cond;
  Measured attack_bot_rate;
  Measured mc_attack_success_uncond;
  Measured bound_f;
  bool bound_checked = false;
  bool bound_ok = true;
  Measured steering_identity_dev;
  Measured partner_overlap;

  Measured cheat_success;
  Measured mc_cheat_success;
  Measured cheat_success_optimal;

  bool mc_checked = false;
  bool mc_within_band = true;

  bool operator==(const PointRecord&) const = default;
};

struct Report {
  int schema_version = 1;
  ExperimentConfig config;
  std::vector<PointRecord> points;

  bool operator==(const Report&) const = default;
};

/// Runs the configured sweep. Deterministic for a fixed config: Monte Carlo
/// trials draw from per-trial substreams of the root seed and are reduced by
/// integer tallies, so the worker count never changes the result.
Report run_experiment(const ExperimentConfig& config);

/// Rounds to 12 significant digits (the rendering precision of reports, so
/// in-memory values round-trip through emitted files).
double round12(double v);

}  // namespace qbclab
