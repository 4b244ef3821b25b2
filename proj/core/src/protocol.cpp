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

#include "qbclab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qbclab/ensemble.hpp"

namespace qbclab {

std::string to_string(UnveilResult r) {
  switch (r) {
    case UnveilResult::Zero: return "0";
    case UnveilResult::One: return "1";
    case UnveilResult::Inconclusive: return "bot";
  }
  return "?";
}

ProgramStep ProgramStep::alloc() {
  ProgramStep s;
  s.kind = Kind::Alloc;
  return s;
}

ProgramStep ProgramStep::apply(std::string name, Eigen::MatrixXcd gate, std::vector<int> slots,
                               std::optional<StepControl> control) {
  ProgramStep s;
  s.kind = Kind::Gate;
  s.gate_name = std::move(name);
  s.gate = std::move(gate);
  s.target_slots = std::move(slots);
  s.control = std::move(control);
  return s;
}

ProgramStep ProgramStep::measure(int slot, Basis basis) {
  ProgramStep s;
  s.kind = Kind::Measure;
  s.slot = slot;
  s.basis = basis;
  return s;
}

ProgramStep ProgramStep::retain(int slot, Basis basis) {
  ProgramStep s;
  s.kind = Kind::Retain;
  s.slot = slot;
  s.basis = basis;
  return s;
}

ProgramStep ProgramStep::send_bit(int private_slot, bool negate) {
  ProgramStep s;
  s.kind = Kind::SendClassical;
  s.bit_source = BitSource{BitSource::Kind::PrivateBit, private_slot, negate};
  return s;
}

ProgramStep ProgramStep::announce_input() {
  ProgramStep s;
  s.kind = Kind::SendClassical;
  s.bit_source = BitSource{BitSource::Kind::Input, 0, false};
  return s;
}

ProgramStep ProgramStep::send_register(int slot) {
  ProgramStep s;
  s.kind = Kind::SendQuantum;
  s.slot = slot;
  return s;
}

std::vector<RegisterId> Execution::owned_live(Party p) const {
  std::vector<RegisterId> out;
  for (const auto& r : state.registers()) {
    if (!r.consumed && r.owner == area_of(p)) out.push_back(r.id);
  }
  return out;
}

namespace {

struct PhasePrograms {
  std::array<ActionProgram, 2> program;  // [Alice, Bob]
  std::array<int, 2> ctx_bit{0, 0};
};

int idx(Party p) { return p == Party::Alice ? 0 : 1; }

[[noreturn]] void violation(Party p, const std::string& what) {
  throw ProtocolViolation("protocol violation by " + to_string(p) + ": " + what);
}

RegisterId resolve_slot(const Execution& exec, Party p, int slot) {
  const auto& acq = exec.acquired_of(p);
  if (slot < 0 || slot >= static_cast<int>(acq.size())) {
    violation(p, "register slot " + std::to_string(slot) + " was never acquired");
  }
  return acq[static_cast<size_t>(slot)];
}

const Register& owned_register(const Execution& exec, Party p, RegisterId id) {
  const Register& r = exec.state.find(id);
  if (r.owner != area_of(p)) {
    violation(p, "register " + std::to_string(id) + " is held by " + to_string(r.owner));
  }
  if (r.consumed) {
    violation(p, "register " + std::to_string(id) + " was already measured");
  }
  return r;
}

/// Position of the next step to run: schedule turn + step within the turn's
/// program.
struct StepPointer {
  size_t turn = 0;
  size_t step = 0;
};

/// A measurement the executor stopped at; the caller decides how to branch.
struct PendingMeasure {
  Party party = Party::Alice;
  RegisterId reg = 0;
  Basis basis = Basis::Plus;
};

void settle_measurement(Execution& exec, Party party, RegisterId reg, Basis basis,
                        const MeasurementRecord& rec, bool record_log) {
  exec.state = *rec.post_state;
  exec.transcript.record_private(party, rec.outcome);
  exec.transcript.scale_probability(rec.probability);
  if (!record_log) return;
  LogEntry e;
  e.party = party;
  e.kind = ProgramStep::Kind::Measure;
  e.slots = {static_cast<int>(reg)};
  e.basis = basis;
  e.outcome = rec.outcome;
  exec.log.push_back(std::move(e));
}

/// Applies steps in place until the next measurement (returned, not yet
/// applied) or the end of the schedule.
std::optional<PendingMeasure> advance(Execution& exec, const std::vector<Party>& schedule,
                                      const PhasePrograms& pp, StepPointer& at, bool record_log) {
  while (at.turn < schedule.size()) {
    const Party party = schedule[at.turn];
    const ActionProgram& prog = pp.program[static_cast<size_t>(idx(party))];
    if (at.step >= prog.size()) {
      ++at.turn;
      at.step = 0;
      continue;
    }
    const ProgramStep& step = prog[at.step];

    switch (step.kind) {
      case ProgramStep::Kind::Alloc: {
        const RegisterId id = exec.next_register_id++;
        exec.state = exec.state.allocated(id, area_of(party));
        exec.acquired[static_cast<size_t>(idx(party))].push_back(id);
        if (record_log) {
          LogEntry e;
          e.party = party;
          e.kind = step.kind;
          e.slots = {static_cast<int>(id)};
          exec.log.push_back(std::move(e));
        }
        break;
      }
      case ProgramStep::Kind::Gate: {
        std::vector<RegisterId> targets;
        for (int s : step.target_slots) {
          const RegisterId id = resolve_slot(exec, party, s);
          owned_register(exec, party, id);
          targets.push_back(id);
        }
        bool apply_it = true;
        Eigen::MatrixXcd mat = step.gate;
        std::string name = step.gate_name;
        if (step.control) {
          switch (step.control->kind) {
            case StepControl::Kind::PrivateBit: {
              const auto& bits = exec.transcript.xi(party);
              if (step.control->index < 0 || step.control->index >= static_cast<int>(bits.size())) {
                violation(party, "control reads private bit " + std::to_string(step.control->index) +
                                     " which does not exist");
              }
              apply_it = bits[static_cast<size_t>(step.control->index)] == 1;
              break;
            }
            case StepControl::Kind::PublicBit: {
              const auto& xs = exec.transcript.xi_s();
              if (step.control->index < 0 || step.control->index >= static_cast<int>(xs.size())) {
                violation(party, "control reads transmitted bit " + std::to_string(step.control->index) +
                                     " which does not exist");
              }
              apply_it = xs[static_cast<size_t>(step.control->index)].bit == 1;
              break;
            }
            case StepControl::Kind::OwnRegisterSlot: {
              const RegisterId cid = resolve_slot(exec, party, step.control->index);
              owned_register(exec, party, cid);
              if (std::find(targets.begin(), targets.end(), cid) != targets.end()) {
                violation(party, "control register coincides with a gate target");
              }
              mat = gates::controlled_in_basis(step.gate, step.control->basis);
              name = "C[" + name + "]";
              targets.insert(targets.begin(), cid);
              break;
            }
          }
        }
        if (apply_it) {
          exec.state = exec.state.applied(Unitary(mat, targets, name));
        }
        if (record_log) {
          LogEntry e;
          e.party = party;
          e.kind = step.kind;
          e.gate_name = step.gate_name;
          e.slots = step.target_slots;
          e.control = step.control;
          exec.log.push_back(std::move(e));
        }
        break;
      }
      case ProgramStep::Kind::Measure: {
        const RegisterId id = resolve_slot(exec, party, step.slot);
        owned_register(exec, party, id);
        ++at.step;  // resume past the measurement once it is settled
        return PendingMeasure{party, id, step.basis};
      }
      case ProgramStep::Kind::Retain: {
        const RegisterId id = resolve_slot(exec, party, step.slot);
        owned_register(exec, party, id);
        if (record_log) {
          LogEntry e;
          e.party = party;
          e.kind = step.kind;
          e.slots = {static_cast<int>(id)};
          e.basis = step.basis;
          exec.log.push_back(std::move(e));
        }
        break;
      }
      case ProgramStep::Kind::SendClassical: {
        int slot = step.bit_source.index;
        if (step.bit_source.kind == ProgramStep::BitSource::Kind::Input) {
          slot = exec.transcript.record_private(party, pp.ctx_bit[static_cast<size_t>(idx(party))] & 1);
        } else if (step.bit_source.negate) {
          const auto& bits = exec.transcript.xi(party);
          if (slot < 0 || slot >= static_cast<int>(bits.size())) {
            violation(party, "announces a flip of bit " + std::to_string(slot) + " which does not exist");
          }
          slot = exec.transcript.record_private(party, bits[static_cast<size_t>(slot)] ^ 1);
        }
        exec.transcript = transmit_classical(exec.transcript, party, slot);
        if (record_log) {
          LogEntry e;
          e.party = party;
          e.kind = step.kind;
          e.slots = {slot};
          e.outcome = exec.transcript.xi_s().back().bit;
          exec.log.push_back(std::move(e));
        }
        break;
      }
      case ProgramStep::Kind::SendQuantum: {
        const RegisterId id = resolve_slot(exec, party, step.slot);
        owned_register(exec, party, id);
        const Party to = other(party);
        exec.state = exec.state.reowned(id, area_of(to));
        exec.acquired[static_cast<size_t>(idx(to))].push_back(id);
        if (record_log) {
          LogEntry e;
          e.party = party;
          e.kind = step.kind;
          e.slots = {static_cast<int>(id)};
          exec.log.push_back(std::move(e));
        }
        break;
      }
    }
    ++at.step;
  }
  return std::nullopt;
}

void run_phase_sampled(Execution& exec, const std::vector<Party>& schedule, const PhasePrograms& pp,
                       RandomStream& stream, bool record_log) {
  StepPointer at;
  while (auto pending = advance(exec, schedule, pp, at, record_log)) {
    const MeasurementRecord rec = exec.state.measured(pending->reg, stream.next_unit(), pending->basis);
    settle_measurement(exec, pending->party, pending->reg, pending->basis, rec, record_log);
  }
}

void enumerate_phase(Execution exec, const std::vector<Party>& schedule, const PhasePrograms& pp,
                     StepPointer at, const ExecOptions& opts, std::vector<Execution>& out) {
  while (true) {
    auto pending = advance(exec, schedule, pp, at, opts.record_log);
    if (!pending) {
      if (static_cast<long>(out.size()) >= opts.branch_cap) {
        throw ResourceError("branch enumeration exceeds the cap of " + std::to_string(opts.branch_cap) +
                            " branches");
      }
      out.push_back(std::move(exec));
      return;
    }
    auto branches = exec.state.measurement_branches(pending->reg, pending->basis);
    const bool two = branches[0].has_value() && branches[1].has_value();
    if (two) {
      Execution fork = exec;
      settle_measurement(fork, pending->party, pending->reg, pending->basis, *branches[0], opts.record_log);
      enumerate_phase(std::move(fork), schedule, pp, at, opts, out);
      settle_measurement(exec, pending->party, pending->reg, pending->basis, *branches[1], opts.record_log);
      continue;  // tail branch in place
    }
    const auto& only = branches[0] ? branches[0] : branches[1];
    settle_measurement(exec, pending->party, pending->reg, pending->basis, *only, opts.record_log);
  }
}

PhasePrograms commit_programs(const ProtocolSpec& spec, const Strategy& alice, const Strategy& bob,
                              int b) {
  PhasePrograms pp;
  const StrategyContext ctx{spec.n, b};
  pp.program[0] = alice.commit ? alice.commit(ctx) : ActionProgram{};
  pp.program[1] = bob.commit ? bob.commit(ctx) : ActionProgram{};
  pp.ctx_bit = {b, b};
  return pp;
}

PhasePrograms unveil_programs(const Execution& exec, const Strategy& alice, const Strategy& bob,
                              std::optional<int> alice_target) {
  PhasePrograms pp;
  const int ta = alice_target.value_or(exec.input_bit);
  pp.program[0] = alice.unveil ? alice.unveil(StrategyContext{exec.spec->n, ta}) : ActionProgram{};
  pp.program[1] = bob.unveil ? bob.unveil(StrategyContext{exec.spec->n, exec.input_bit}) : ActionProgram{};
  pp.ctx_bit = {ta, exec.input_bit};
  return pp;
}

Execution fresh_execution(const std::shared_ptr<const ProtocolSpec>& spec, int b,
                          const ExecOptions& opts) {
  Execution exec;
  exec.spec = spec;
  exec.state = PureState::scalar(opts.register_cap);
  exec.input_bit = b;
  exec.phase = Phase::PostCommit;
  return exec;
}

}  // namespace

Execution run_commit(const std::shared_ptr<const ProtocolSpec>& spec, const Strategy& alice,
                     const Strategy& bob, int b, RandomStream& stream, const ExecOptions& opts) {
  Execution exec = fresh_execution(spec, b, opts);
  const PhasePrograms pp = commit_programs(*spec, alice, bob, b);
  run_phase_sampled(exec, spec->commit_schedule, pp, stream, opts.record_log);
  return exec;
}

UnveilResult run_unveil(const Execution& exec, const Strategy& alice, const Strategy& bob,
                        RandomStream& stream, std::optional<int> alice_target,
                        const ExecOptions& opts) {
  if (exec.phase != Phase::PostCommit) {
    throw ProtocolViolation("run_unveil requires a post-commit execution");
  }
  Execution work = exec;
  const PhasePrograms pp = unveil_programs(exec, alice, bob, alice_target);
  run_phase_sampled(work, exec.spec->unveil_schedule, pp, stream, opts.record_log);
  work.phase = Phase::PostUnveil;
  const DecodeView view{exec.spec->n, work.transcript.xi_s(), work.transcript.xi(Party::Bob)};
  return exec.spec->decode(view);
}

std::vector<Execution> enumerate_branches(const std::shared_ptr<const ProtocolSpec>& spec,
                                          const Strategy& alice, const Strategy& bob, int b,
                                          const ExecOptions& opts) {
  Execution exec = fresh_execution(spec, b, opts);
  const PhasePrograms pp = commit_programs(*spec, alice, bob, b);
  std::vector<Execution> out;
  enumerate_phase(std::move(exec), spec->commit_schedule, pp, StepPointer{}, opts, out);
  double total = 0.0;
  for (const auto& e : out) total += e.transcript.branch_probability();
  if (std::abs(total - 1.0) > tol::kSpectra) {
    throw InvariantError("enumerated branch probabilities sum to " + std::to_string(total));
  }
  return out;
}

std::vector<UnveilBranch> enumerate_unveil(const Execution& exec, const Strategy& alice,
                                           const Strategy& bob, std::optional<int> alice_target,
                                           const ExecOptions& opts) {
  if (exec.phase != Phase::PostCommit) {
    throw ProtocolViolation("enumerate_unveil requires a post-commit execution");
  }
  const PhasePrograms pp = unveil_programs(exec, alice, bob, alice_target);
  std::vector<Execution> runs;
  enumerate_phase(exec, exec.spec->unveil_schedule, pp, StepPointer{}, opts, runs);
  std::vector<UnveilBranch> out;
  out.reserve(runs.size());
  for (auto& r : runs) {
    r.phase = Phase::PostUnveil;
    const DecodeView view{exec.spec->n, r.transcript.xi_s(), r.transcript.xi(Party::Bob)};
    UnveilBranch ub;
    ub.result = exec.spec->decode(view);
    ub.exec = std::move(r);
    out.push_back(std::move(ub));
  }
  return out;
}

ConcealmentAudit audit_concealment(const std::shared_ptr<const ProtocolSpec>& spec,
                                   const Strategy& alice_honest, const Strategy& bob,
                                   const ExecOptions& opts) {
  ExecOptions quiet = opts;
  quiet.record_log = false;
  const auto b0 = enumerate_branches(spec, alice_honest, bob, 0, quiet);
  const auto b1 = enumerate_branches(spec, alice_honest, bob, 1, quiet);

  struct Group {
    BranchEnsemble e0, e1;
    double p0 = 0.0, p1 = 0.0;
  };
  std::map<std::string, Group> groups;
  for (const auto& e : b0) {
    auto& g = groups[e.transcript.eta_key()];
    g.e0.push_back(WeightedBranch{e.transcript.branch_probability(), &e.state});
    g.p0 += e.transcript.branch_probability();
  }
  for (const auto& e : b1) {
    auto& g = groups[e.transcript.eta_key()];
    g.e1.push_back(WeightedBranch{e.transcript.branch_probability(), &e.state});
    g.p1 += e.transcript.branch_probability();
  }

  ConcealmentAudit audit;
  double tv = 0.0;
  for (const auto& [key, g] : groups) {
    (void)key;
    tv += std::abs(g.p0 - g.p1);
    const double weight = (g.p0 + g.p1) / 2.0;
    if (g.e0.empty() || g.e1.empty()) continue;  // key determines the bit: fidelity 0
    audit.expected_fidelity +=
        weight * ensemble_reduction_fidelity(g.e0, g.e1, std::vector<Owner>{Owner::B});
  }
  audit.key_marginal_distance = tv / 2.0;
  return audit;
}

}  // namespace qbclab
