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

#include "qbclab/protocols.hpp"

#include <cmath>

namespace qbclab {

namespace {

Basis coding_basis(int b) { return b ? Basis::Times : Basis::Plus; }

/// Commit program of honest BB84 Alice. Per position: two fresh registers,
/// a Hadamard and a copy produce the shared random bit; committing 1 writes
/// both registers into the diagonal basis before the random-bit register is
/// read out in that same basis; the coded register goes to Bob.
ActionProgram bb84_alice_commit(int n, int b) {
  ActionProgram p;
  for (int i = 0; i < n; ++i) {
    const int rw = 2 * i, rc = 2 * i + 1;
    p.push_back(ProgramStep::alloc());
    p.push_back(ProgramStep::alloc());
    p.push_back(ProgramStep::apply("H", gates::hadamard(), {rw}));
    p.push_back(ProgramStep::apply("CX", gates::cnot(), {rw, rc}));
    if (b == 1) {
      p.push_back(ProgramStep::apply("H", gates::hadamard(), {rw}));
      p.push_back(ProgramStep::apply("H", gates::hadamard(), {rc}));
    }
    p.push_back(ProgramStep::measure(rw, coding_basis(b)));
    p.push_back(ProgramStep::send_register(rc));
  }
  return p;
}

ActionProgram bb84_alice_unveil(int n) {
  ActionProgram p;
  for (int i = 0; i < n; ++i) p.push_back(ProgramStep::send_bit(i));
  return p;
}

/// Commit program of honest Bob: draw a basis bit per position, then measure
/// the i-th received register, rotating it out of the diagonal basis first
/// when the basis bit says so.
ActionProgram bb84_bob_commit(int n) {
  ActionProgram p;
  for (int i = 0; i < n; ++i) {
    const int t = n + i;  // slots 0..n-1 are the received registers
    p.push_back(ProgramStep::alloc());
    p.push_back(ProgramStep::apply("H", gates::hadamard(), {t}));
    p.push_back(ProgramStep::measure(t, Basis::Plus));
  }
  for (int i = 0; i < n; ++i) {
    p.push_back(ProgramStep::apply("H", gates::hadamard(), {i},
                                   StepControl{StepControl::Kind::PrivateBit, i, Basis::Plus}));
    p.push_back(ProgramStep::measure(i, Basis::Plus));
  }
  return p;
}

}  // namespace

UnveilResult bb84_decode(const std::vector<int>& w, const std::vector<int>& w_hat,
                         const std::vector<Basis>& theta_hat) {
  if (w.size() != w_hat.size() || w.size() != theta_hat.size()) {
    throw InvariantError("bb84_decode: length mismatch");
  }
  int inferred = -1;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] == w_hat[i]) continue;
    // disagreement: the coding basis differs from theta_hat[i]
    const int candidate = theta_hat[i] == Basis::Plus ? 1 : 0;
    if (inferred == -1) {
      inferred = candidate;
    } else if (inferred != candidate) {
      return UnveilResult::Inconclusive;
    }
  }
  if (inferred == -1) return UnveilResult::Inconclusive;  // no evidence
  return unveil_of_bit(inferred);
}

std::shared_ptr<const ProtocolSpec> bb84_protocol(int n, int register_cap) {
  if (n < 1) throw ConfigError("bb84_protocol: n must be at least 1");
  if (2 * n > register_cap) {
    throw ResourceError("bb84_protocol: n = " + std::to_string(n) +
                        " needs more live registers than the cap of " + std::to_string(register_cap));
  }
  auto spec = std::make_shared<ProtocolSpec>();
  spec->name = "bb84";
  spec->n = n;
  spec->honest_alice = Strategy{
      "bb84-honest-alice",
      [n](const StrategyContext& ctx) { return bb84_alice_commit(n, ctx.b & 1); },
      [n](const StrategyContext&) { return bb84_alice_unveil(n); },
  };
  spec->honest_bob = Strategy{
      "bb84-honest-bob",
      [n](const StrategyContext&) { return bb84_bob_commit(n); },
      [](const StrategyContext&) { return ActionProgram{}; },
  };
  spec->decode = [n](const DecodeView& view) {
    if (static_cast<int>(view.xi_s.size()) < n || static_cast<int>(view.xi_b.size()) < 2 * n) {
      return UnveilResult::Inconclusive;
    }
    std::vector<int> w(static_cast<size_t>(n));
    std::vector<int> w_hat(static_cast<size_t>(n));
    std::vector<Basis> theta_hat(static_cast<size_t>(n));
    const size_t base = view.xi_s.size() - static_cast<size_t>(n);
    for (int i = 0; i < n; ++i) {
      w[static_cast<size_t>(i)] = view.xi_s[base + static_cast<size_t>(i)].bit;
      theta_hat[static_cast<size_t>(i)] = view.xi_b[static_cast<size_t>(i)] ? Basis::Times : Basis::Plus;
      w_hat[static_cast<size_t>(i)] = view.xi_b[static_cast<size_t>(n + i)];
    }
    return bb84_decode(w, w_hat, theta_hat);
  };
  spec->commit_schedule = {Party::Alice, Party::Bob};
  spec->unveil_schedule = {Party::Alice, Party::Bob};
  return spec;
}

Strategy epr_attack_strategy(int n) {
  Strategy s;
  s.name = "bb84-epr-attack";
  s.commit = [n](const StrategyContext&) {
    // honest commit(0) with nothing handed to the environment
    ActionProgram p;
    for (int i = 0; i < n; ++i) {
      const int rw = 2 * i, rc = 2 * i + 1;
      p.push_back(ProgramStep::alloc());
      p.push_back(ProgramStep::alloc());
      p.push_back(ProgramStep::apply("H", gates::hadamard(), {rw}));
      p.push_back(ProgramStep::apply("CX", gates::cnot(), {rw, rc}));
      p.push_back(ProgramStep::retain(rw, Basis::Plus));
      p.push_back(ProgramStep::send_register(rc));
    }
    return p;
  };
  s.unveil = [n](const StrategyContext& ctx) {
    // steering to the target coding is the identity here; measure the kept
    // halves in the target basis and announce
    ActionProgram p;
    for (int i = 0; i < n; ++i) p.push_back(ProgramStep::measure(2 * i, coding_basis(ctx.b & 1)));
    for (int i = 0; i < n; ++i) p.push_back(ProgramStep::send_bit(i));
    return p;
  };
  return s;
}

Strategy classical_guess_strategy(int n) {
  Strategy s;
  s.name = "bb84-classical-guess";
  s.commit = [n](const StrategyContext&) { return bb84_alice_commit(n, 0); };
  s.unveil = [n](const StrategyContext& ctx) {
    ActionProgram p;
    if ((ctx.b & 1) == 0) {
      for (int i = 0; i < n; ++i) p.push_back(ProgramStep::send_bit(i));
    } else {
      p.push_back(ProgramStep::send_bit(0, /*negate=*/true));
      for (int i = 1; i < n; ++i) p.push_back(ProgramStep::send_bit(i));
    }
    return p;
  };
  return s;
}

namespace {

double masked_guess_success(int n, unsigned mask, const ExecOptions& opts) {
  auto spec = bb84_protocol(n, opts.register_cap);
  Strategy alice;
  alice.name = "bb84-masked-guess";
  alice.commit = [n](const StrategyContext&) { return bb84_alice_commit(n, 0); };
  alice.unveil = [n, mask](const StrategyContext&) {
    ActionProgram p;
    for (int i = 0; i < n; ++i) p.push_back(ProgramStep::send_bit(i, (mask >> i) & 1u));
    return p;
  };
  double success = 0.0;
  for (const auto& branch : enumerate_branches(spec, alice, spec->honest_bob, 0, opts)) {
    for (const auto& ub : enumerate_unveil(branch, alice, spec->honest_bob, 1, opts)) {
      if (ub.result == UnveilResult::One) success += ub.exec.transcript.branch_probability();
    }
  }
  return success;
}

}  // namespace

double classical_guess_success(int n, const ExecOptions& opts) {
  return masked_guess_success(n, 1u, opts);
}

double optimal_classical_guess_success(int n, const ExecOptions& opts) {
  double best = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    best = std::max(best, masked_guess_success(n, mask, opts));
  }
  return best;
}

std::shared_ptr<const ProtocolSpec> toy_protocol(double alpha, int register_cap) {
  if (alpha < 0.0 || alpha > M_PI_2 + 1e-12) {
    throw ConfigError("toy_protocol: alpha must lie in [0, pi/2]");
  }
  auto spec = std::make_shared<ProtocolSpec>();
  spec->name = "toy";
  spec->n = 1;
  spec->honest_alice = Strategy{
      "toy-honest-alice",
      [alpha](const StrategyContext& ctx) {
        ActionProgram p;
        p.push_back(ProgramStep::alloc());  // spectator, stays |0>
        p.push_back(ProgramStep::alloc());
        if ((ctx.b & 1) == 1) {
          p.push_back(ProgramStep::apply("R", gates::plane_rotation(alpha), {1}));
        }
        p.push_back(ProgramStep::send_register(1));
        return p;
      },
      [](const StrategyContext&) {
        ActionProgram p;
        p.push_back(ProgramStep::announce_input());
        return p;
      },
  };
  spec->honest_bob = Strategy{
      "toy-honest-bob",
      [](const StrategyContext&) { return ActionProgram{}; },
      [alpha](const StrategyContext&) {
        // undo the announced coding, then check for |0>
        ActionProgram p;
        p.push_back(ProgramStep::apply("R'", gates::plane_rotation(-alpha), {0},
                                       StepControl{StepControl::Kind::PublicBit, 0, Basis::Plus}));
        p.push_back(ProgramStep::measure(0, Basis::Plus));
        return p;
      },
  };
  spec->decode = [](const DecodeView& view) {
    if (view.xi_s.empty() || view.xi_b.empty()) return UnveilResult::Inconclusive;
    if (view.xi_b.back() != 0) return UnveilResult::Inconclusive;  // projection failed
    return unveil_of_bit(view.xi_s.front().bit);
  };
  spec->commit_schedule = {Party::Alice};
  spec->unveil_schedule = {Party::Alice, Party::Bob};
  (void)register_cap;
  return spec;
}

Strategy passive_bob() {
  Strategy s;
  s.name = "passive-bob";
  s.commit = [](const StrategyContext&) { return ActionProgram{}; };
  s.unveil = [](const StrategyContext&) { return ActionProgram{}; };
  return s;
}

}  // namespace qbclab
