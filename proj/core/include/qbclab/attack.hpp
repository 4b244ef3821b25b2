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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbclab/protocol.hpp"
#include "qbclab/random.hpp"

namespace qbclab {

/// Mechanical rerouting of a commit program: every measurement whose bit is
/// never transmitted is replaced by coherent retention of the register; the
/// program is otherwise unchanged, so the derived action sequence matches
/// the honest one step for step. Classical controls on retained bits become
/// quantum controls on the retained registers.
struct WithholdingPlan {
  Party party = Party::Alice;

  struct Withheld {
    int slot = -1;        // register slot that stays coherent
    Basis basis = Basis::Plus;
    int original_bit = 0; // private-bit index the honest program would have produced
  };
  std::vector<Withheld> withheld;

  ActionProgram derived;
  std::vector<int> bit_remap;  // honest private-bit index -> derived index, -1 when withheld
  int honest_bits = 0;
  int derived_bits = 0;
};

WithholdingPlan make_withholding_plan(const ActionProgram& honest_commit, Party party);

/// Unveil program that first performs the measurements the withholding plan
/// deferred (in the bases of the honest commit program for `target`) and
/// then replays the honest unveil program with its bit references remapped.
ActionProgram deferred_honest_unveil(const ProtocolSpec& spec, Party party, int target);

/// Withholding applied to a party's honest strategy; the commit bit is
/// whatever the caller passes at run time.
Strategy withholding_strategy(const std::shared_ptr<const ProtocolSpec>& spec, Party party);

/// Alice's withholding strategy with the commit bit pinned to 0. Its default
/// unveil defers the withheld measurements honestly for the requested bit;
/// synthesize_unveil_prime produces the steering version.
Strategy commit_prime(const std::shared_ptr<const ProtocolSpec>& spec);

/// Bob's mirror of commit_prime; used for the reduction-equality audit.
Strategy commit_double_prime(const std::shared_ptr<const ProtocolSpec>& spec);

/// True when the two logs describe the same labeled action sequence, with a
/// withheld retention standing in for the corresponding measurement and
/// quantum controls standing in for classical ones.
bool formally_identical(const std::vector<LogEntry>& honest, const std::vector<LogEntry>& derived);

/// f(z) = z^2: if the steered state reaches the target with squared overlap
/// z^2 and the honest unveil accepts the target state surely, acceptance of
/// the steered state is at least z^2. Monotone with f(1) = 1.
double success_lower_bound(double fidelity_value);

struct FidelityAudit {
  double expected = 0.0;  // E over the transmitted-string marginal
  std::vector<std::pair<std::string, double>> per_gamma;
};

/// Expected fidelity between Bob's extended reductions (his area plus his
/// environment store) after withheld commits of 0 and 1, keyed by the
/// transmitted classical string.
FidelityAudit fidelity_audit(const std::shared_ptr<const ProtocolSpec>& spec,
                             const ExecOptions& opts = {});

struct SynthesizedUnveil {
  Strategy strategy;
  double fprime = 0.0;               // fidelity of the two reductions at this transcript
  double partner_overlap = 0.0;      // <psi_01 | psi'_target>, real by construction
  double steering_identity_dev = 0.0;  // max |U - phase * I|
  bool aborted = false;              // transcript impossible under the target bit
};

/// Builds Alice's cheating unveil for the observed transcript: reconstructs
/// the two withheld-commit states at this transcript, computes the maximal-
/// overlap purification of the committed state's reduction, steers onto it
/// with a unitary on Alice's side, then continues with the deferred honest
/// unveil of the target bit.
SynthesizedUnveil synthesize_unveil_prime(const Execution& exec, int target,
                                          const ExecOptions& opts = {});

struct AttackGammaStats {
  std::string gamma;
  double p_gamma = 0.0;
  double fprime = 0.0;
  double partner_overlap = 0.0;
  double success_uncond = 0.0;
  double success_cond = 0.0;
  double bot_rate = 0.0;
  double bound = 0.0;                 // f(fprime)
  bool bound_ok = true;               // success_cond >= bound (minus MC slack)
  double steering_identity_dev = 0.0;
  bool aborted = false;
};

struct AttackReport {
  int target = 1;
  bool exact = true;
  long trials = 0;
  double expected_fprime = 0.0;
  double success_uncond = 0.0;
  double success_cond = 0.0;
  double bot_rate = 0.0;
  double bound = 0.0;   // f(expected_fprime)
  bool bound_ok = true;
  double steering_identity_dev = 0.0;  // max over transcripts
  std::vector<AttackGammaStats> per_gamma;
};

/// Full generic attack by exhaustive enumeration: withheld commit of 0,
/// honest Bob, synthesized unveil of `target` for every transcript.
AttackReport run_attack_enumerated(const std::shared_ptr<const ProtocolSpec>& spec, int target,
                                   const ExecOptions& opts = {});

/// Monte Carlo version: `trials` sampled runs on substreams of `root_seed`;
/// the per-transcript synthesis is enumerated once and cached. Trials fan
/// out over `jobs` workers; tallies are integer counts so the result does
/// not depend on scheduling.
AttackReport run_attack_montecarlo(const std::shared_ptr<const ProtocolSpec>& spec, int target,
                                   long trials, std::uint64_t root_seed, int jobs = 1,
                                   const ExecOptions& opts = {});

}  // namespace qbclab
