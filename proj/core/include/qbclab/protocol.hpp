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

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbclab/random.hpp"
#include "qbclab/state.hpp"
#include "qbclab/transcript.hpp"

namespace qbclab {

enum class UnveilResult : std::uint8_t { Zero, One, Inconclusive };

inline UnveilResult unveil_of_bit(int b) { return b ? UnveilResult::One : UnveilResult::Zero; }
std::string to_string(UnveilResult r);

/// Classical control of a program step. PrivateBit reads the acting party's
/// own recorded bit; PublicBit reads a transmitted bit; OwnRegisterSlot turns
/// the step into a quantum-controlled one on a still-coherent register read
/// in `basis` (used by mechanically derived withholding strategies).
struct StepControl {
  enum class Kind : std::uint8_t { PrivateBit, PublicBit, OwnRegisterSlot };
  Kind kind = Kind::PrivateBit;
  int index = 0;
  Basis basis = Basis::Plus;
};

/// One declarative step of a party program. Registers are addressed by
/// *slots*: indices into the party's acquisition list (allocations and
/// received registers, in order), which stay stable across sends.
struct ProgramStep {
  enum class Kind : std::uint8_t { Alloc, Gate, Measure, Retain, SendClassical, SendQuantum };

  struct BitSource {
    enum class Kind : std::uint8_t { PrivateBit, Input };
    Kind kind = Kind::PrivateBit;
    int index = 0;       // private bit slot
    bool negate = false; // announce the flipped value (recorded as a fresh choice bit)
  };

  Kind kind = Kind::Alloc;
  Eigen::MatrixXcd gate;
  std::string gate_name;
  std::vector<int> target_slots;
  std::optional<StepControl> control;
  int slot = -1;                 // Measure / Retain / SendQuantum target
  Basis basis = Basis::Plus;     // Measure / Retain basis
  BitSource bit_source;          // SendClassical

  static ProgramStep alloc();
  static ProgramStep apply(std::string name, Eigen::MatrixXcd gate, std::vector<int> slots,
                           std::optional<StepControl> control = std::nullopt);
  static ProgramStep measure(int slot, Basis basis = Basis::Plus);
  static ProgramStep retain(int slot, Basis basis = Basis::Plus);
  static ProgramStep send_bit(int private_slot, bool negate = false);
  static ProgramStep announce_input();
  static ProgramStep send_register(int slot);
};

using ActionProgram = std::vector<ProgramStep>;

/// Inputs a strategy may use when laying out its program: the protocol's
/// security parameter and the bit it is asked to commit (or unveil).
/// Dishonest strategies are free to ignore `b`.
struct StrategyContext {
  int n = 1;
  int b = 0;
};

/// A party strategy: programs for the commit and unveil phases.
struct Strategy {
  std::string name;
  std::function<ActionProgram(const StrategyContext&)> commit;
  std::function<ActionProgram(const StrategyContext&)> unveil;
};

/// What Bob's decode rule may look at: the security parameter, the
/// transmitted string and his own private bits.
struct DecodeView {
  int n = 1;
  const std::vector<TranscriptEntry>& xi_s;
  const std::vector<int>& xi_b;
};
using DecodeRule = std::function<UnveilResult(const DecodeView&)>;

struct ProtocolSpec {
  std::string name;
  int n = 1;
  Strategy honest_alice;
  Strategy honest_bob;
  DecodeRule decode;
  std::vector<Party> commit_schedule{Party::Alice, Party::Bob};
  std::vector<Party> unveil_schedule{Party::Alice, Party::Bob};
};

enum class Phase : std::uint8_t { PostCommit, PostUnveil };

/// Replayable record of one executed (or withheld) action.
struct LogEntry {
  Party party = Party::Alice;
  ProgramStep::Kind kind = ProgramStep::Kind::Alloc;
  std::string gate_name;
  std::vector<int> slots;
  std::optional<StepControl> control;
  Basis basis = Basis::Plus;
  int outcome = -1;
};

/// One execution branch: quantum state, classical transcript, per-party
/// register acquisition lists and the ordered action log.
struct Execution {
  std::shared_ptr<const ProtocolSpec> spec;
  PureState state = PureState::scalar();
  ClassicalTranscript transcript;
  std::array<std::vector<RegisterId>, 2> acquired;  // [Alice, Bob]
  std::vector<LogEntry> log;
  Phase phase = Phase::PostCommit;
  int input_bit = 0;
  RegisterId next_register_id = 0;

  const std::vector<RegisterId>& acquired_of(Party p) const {
    return acquired[p == Party::Alice ? 0 : 1];
  }
  /// Live registers currently owned by the party's area, in state order.
  std::vector<RegisterId> owned_live(Party p) const;
};

struct ExecOptions {
  int register_cap = kDefaultRegisterCap;
  long branch_cap = 1L << 20;
  bool record_log = true;  // audits over large branch sets switch this off
};

/// Runs the commit phase along one sampled trajectory.
Execution run_commit(const std::shared_ptr<const ProtocolSpec>& spec, const Strategy& alice,
                     const Strategy& bob, int b, RandomStream& stream,
                     const ExecOptions& opts = {});

/// Runs the unveil phase on a post-commit execution and decodes. When
/// `alice_target` is set it is handed to Alice's unveil program in place of
/// the committed input bit.
UnveilResult run_unveil(const Execution& exec, const Strategy& alice, const Strategy& bob,
                        RandomStream& stream, std::optional<int> alice_target = std::nullopt,
                        const ExecOptions& opts = {});

/// Exhaustive weighted branch list of the commit phase. Branch probabilities
/// sum to 1 within tol::kSpectra.
std::vector<Execution> enumerate_branches(const std::shared_ptr<const ProtocolSpec>& spec,
                                          const Strategy& alice, const Strategy& bob, int b,
                                          const ExecOptions& opts = {});

struct UnveilBranch {
  Execution exec;
  UnveilResult result = UnveilResult::Inconclusive;
};

/// Exhaustive unveil continuation of one post-commit branch. Probabilities
/// are cumulative (they include the commit branch's probability).
std::vector<UnveilBranch> enumerate_unveil(const Execution& exec, const Strategy& alice,
                                           const Strategy& bob,
                                           std::optional<int> alice_target = std::nullopt,
                                           const ExecOptions& opts = {});

struct ConcealmentAudit {
  double expected_fidelity = 0.0;
  /// Total variation distance between the two branch-key marginals.
  double key_marginal_distance = 0.0;
};

/// Audits how much the transcript-plus-Bob view reveals about the committed
/// bit: enumerates commits for b = 0 and b = 1 with the given strategies,
/// keys branches by (transmitted string, Bob's private bits), and averages
/// the fidelity between Bob's reduced states; a key reachable under only one
/// bit contributes fidelity 0. Expectations are taken under the b-averaged
/// key marginal.
ConcealmentAudit audit_concealment(const std::shared_ptr<const ProtocolSpec>& spec,
                                   const Strategy& alice_honest, const Strategy& bob,
                                   const ExecOptions& opts = {});

}  // namespace qbclab
