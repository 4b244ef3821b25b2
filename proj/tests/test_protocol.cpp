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
#include <map>

#include "qbclab/ensemble.hpp"
#include "qbclab/protocol.hpp"
#include "qbclab/protocols.hpp"

using namespace qbclab;

namespace {

std::shared_ptr<const ProtocolSpec> empty_protocol() {
  auto spec = std::make_shared<ProtocolSpec>();
  spec->name = "empty";
  spec->n = 1;
  spec->honest_alice = passive_bob();
  spec->honest_bob = passive_bob();
  spec->decode = [](const DecodeView&) { return UnveilResult::Inconclusive; };
  return spec;
}

}  // namespace

TEST_CASE("run_commit: empty protocol keeps the initial state and transcript") {
  auto spec = empty_protocol();
  RandomStream rng(1);
  const Execution exec = run_commit(spec, spec->honest_alice, spec->honest_bob, 0, rng);
  CHECK(exec.state.registers().empty());
  CHECK(exec.transcript.xi_s().empty());
  CHECK(exec.transcript.branch_probability() == 1.0);
  CHECK(exec.phase == Phase::PostCommit);
}

TEST_CASE("run_commit: honest commit hands Bob one coded register per position") {
  auto spec = bb84_protocol(1);
  RandomStream rng(3);
  const Strategy bob = passive_bob();
  const Execution exec = run_commit(spec, spec->honest_alice, bob, 0, rng);
  CHECK(exec.transcript.xi_s().empty());
  const auto bob_regs = exec.owned_live(Party::Bob);
  REQUIRE(bob_regs.size() == 1);
  // Alice's record register is consumed into her environment with value w
  const int w = exec.transcript.xi(Party::Alice).at(0);
  CHECK(exec.state.find(0).consumed);
  CHECK(exec.state.find(0).owner == Owner::EA);
  CHECK(exec.state.find(0).value == w);
  // Bob's register is |w> in the rectilinear coding
  const Eigen::VectorXcd full = exec.state.materialized_amplitudes();
  const Eigen::Index idx = (w << 1) | w;
  CHECK(std::abs(std::abs(full(idx)) - 1.0) < 1e-12);
}

TEST_CASE("run_commit: entangling Alice leaves shared pairs") {
  auto spec = bb84_protocol(1);
  const Strategy alice = epr_attack_strategy(1);
  RandomStream rng(5);
  const Execution exec = run_commit(spec, alice, passive_bob(), 0, rng);
  const Eigen::VectorXcd amps = exec.state.materialized_amplitudes();
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(amps(0) - s) < 1e-12);
  CHECK(std::abs(amps(3) - s) < 1e-12);
  CHECK(exec.owned_live(Party::Alice).size() == 1);
  CHECK(exec.owned_live(Party::Bob).size() == 1);
}

TEST_CASE("enumerate_branches: counts and normalization") {
  // two choices of w, and for the diagonal readout basis two outcomes
  auto spec = bb84_protocol(1);
  const auto branches = enumerate_branches(spec, spec->honest_alice, spec->honest_bob, 0);
  CHECK(branches.size() == 6);

  const auto single = enumerate_branches(empty_protocol(), passive_bob(), passive_bob(), 0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].transcript.branch_probability() == 1.0);

  auto spec2 = bb84_protocol(2);
  double total = 0.0;
  for (const auto& b : enumerate_branches(spec2, spec2->honest_alice, spec2->honest_bob, 0)) {
    total += b.transcript.branch_probability();
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("enumerate_branches: exact joint distribution of the classical records") {
  // by hand: w uniform, basis bit uniform, readout equals w when the bases
  // agree and is uniform otherwise
  auto spec = bb84_protocol(2);
  const auto branches = enumerate_branches(spec, spec->honest_alice, spec->honest_bob, 0);
  std::map<std::string, double> dist;
  for (const auto& b : branches) {
    dist[b.transcript.xi_string(Party::Alice) + "|" + b.transcript.xi_string(Party::Bob)] +=
        b.transcript.branch_probability();
  }
  for (int w0 = 0; w0 < 2; ++w0) {
    for (int w1 = 0; w1 < 2; ++w1) {
      for (int t0 = 0; t0 < 2; ++t0) {
        for (int t1 = 0; t1 < 2; ++t1) {
          for (int v0 = 0; v0 < 2; ++v0) {
            for (int v1 = 0; v1 < 2; ++v1) {
              double p = 0.25;  // the two w bits
              p *= 0.25;        // the two basis bits
              p *= (t0 == 0 ? (v0 == w0 ? 1.0 : 0.0) : 0.5);
              p *= (t1 == 0 ? (v1 == w1 ? 1.0 : 0.0) : 0.5);
              const std::string key = std::to_string(w0) + std::to_string(w1) + "|" +
                                      std::to_string(t0) + std::to_string(t1) +
                                      std::to_string(v0) + std::to_string(v1);
              const double got = dist.count(key) ? dist[key] : 0.0;
              CHECK(std::abs(got - p) <= 1e-12);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("sampling agrees with enumeration within four sigma") {
  auto spec = bb84_protocol(2);
  std::map<std::string, double> exact;
  for (const auto& b : enumerate_branches(spec, spec->honest_alice, spec->honest_bob, 0)) {
    exact[b.transcript.eta_key()] += b.transcript.branch_probability();
  }
  const long trials = 4000;
  std::map<std::string, long> seen;
  for (long i = 0; i < trials; ++i) {
    RandomStream stream(99, static_cast<std::uint64_t>(i));
    const Execution exec = run_commit(spec, spec->honest_alice, spec->honest_bob, 0, stream);
    seen[exec.transcript.eta_key()]++;
  }
  for (const auto& [key, p] : exact) {
    const double freq = seen.count(key) ? static_cast<double>(seen[key]) / trials : 0.0;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(freq - p) <= 4.0 * sigma + 1e-12);
  }
}

TEST_CASE("run_unveil: honest unveils decode to the committed bit or bot") {
  auto spec = bb84_protocol(4);
  for (int b = 0; b < 2; ++b) {
    for (std::uint64_t s = 0; s < 40; ++s) {
      RandomStream rng(1234 + b, s);
      const Execution exec = run_commit(spec, spec->honest_alice, spec->honest_bob, b, rng);
      const UnveilResult r = run_unveil(exec, spec->honest_alice, spec->honest_bob, rng);
      CHECK(r != unveil_of_bit(1 - b));
    }
  }
}

TEST_CASE("run_unveil: phase misuse is rejected") {
  auto spec = bb84_protocol(1);
  RandomStream rng(7);
  Execution exec = run_commit(spec, spec->honest_alice, spec->honest_bob, 0, rng);
  exec.phase = Phase::PostUnveil;
  CHECK_THROWS_AS(run_unveil(exec, spec->honest_alice, spec->honest_bob, rng), ProtocolViolation);
}

TEST_CASE("ownership safety: foreign and spent registers are rejected with the party named") {
  auto spec = bb84_protocol(1);

  // Alice ships the coded register, then tries to keep acting on it
  Strategy rogue;
  rogue.name = "rogue-alice";
  rogue.commit = [](const StrategyContext&) {
    ActionProgram p;
    p.push_back(ProgramStep::alloc());
    p.push_back(ProgramStep::send_register(0));
    p.push_back(ProgramStep::apply("X", gates::pauli_x(), {0}));
    return p;
  };
  rogue.unveil = [](const StrategyContext&) { return ActionProgram{}; };
  RandomStream rng(11);
  try {
    run_commit(spec, rogue, passive_bob(), 0, rng);
    FAIL("expected a protocol violation");
  } catch (const ProtocolViolation& e) {
    CHECK(std::string(e.what()).find("Alice") != std::string::npos);
  }

  // measuring the same register twice
  Strategy twice;
  twice.name = "measure-twice";
  twice.commit = [](const StrategyContext&) {
    ActionProgram p;
    p.push_back(ProgramStep::alloc());
    p.push_back(ProgramStep::measure(0));
    p.push_back(ProgramStep::measure(0));
    return p;
  };
  twice.unveil = [](const StrategyContext&) { return ActionProgram{}; };
  RandomStream rng2(13);
  CHECK_THROWS_AS(run_commit(spec, twice, passive_bob(), 0, rng2), ProtocolViolation);
}

TEST_CASE("decode is a pure function of its view") {
  auto spec = bb84_protocol(2);
  RandomStream rng(17);
  const Execution exec = run_commit(spec, spec->honest_alice, spec->honest_bob, 1, rng);
  for (const auto& ub : enumerate_unveil(exec, spec->honest_alice, spec->honest_bob)) {
    const DecodeView view{spec->n, ub.exec.transcript.xi_s(), ub.exec.transcript.xi(Party::Bob)};
    CHECK(spec->decode(view) == spec->decode(view));
    CHECK(spec->decode(view) == ub.result);
  }
}

TEST_CASE("audit_concealment: nothing leaks from the honest coding") {
  auto spec = bb84_protocol(2);
  const auto audit = audit_concealment(spec, spec->honest_alice, spec->honest_bob);
  CHECK(std::abs(audit.expected_fidelity - 1.0) <= 1e-9);
  CHECK(audit.key_marginal_distance <= 1e-9);
}

TEST_CASE("audit_concealment: tunable coding leaks exactly its overlap") {
  CHECK(std::abs(audit_concealment(toy_protocol(0.0), toy_protocol(0.0)->honest_alice,
                                   toy_protocol(0.0)->honest_bob)
                     .expected_fidelity -
                 1.0) <= 1e-9);
  auto spec = toy_protocol(M_PI / 4);
  const auto audit = audit_concealment(spec, spec->honest_alice, spec->honest_bob);
  CHECK(std::abs(audit.expected_fidelity - std::cos(M_PI / 4)) <= 1e-9);

  auto orth = toy_protocol(M_PI_2);
  CHECK(std::abs(audit_concealment(orth, orth->honest_alice, orth->honest_bob).expected_fidelity) <=
        1e-9);
}

TEST_CASE("branch cap triggers a resource error") {
  auto spec = bb84_protocol(3);
  ExecOptions opts;
  opts.branch_cap = 10;
  CHECK_THROWS_AS(enumerate_branches(spec, spec->honest_alice, spec->honest_bob, 0, opts),
                  ResourceError);
}

TEST_CASE("ensemble reductions agree with dense partial traces") {
  auto spec = bb84_protocol(2);
  for (int b = 0; b < 2; ++b) {
    const auto branches = enumerate_branches(spec, spec->honest_alice, spec->honest_bob, b);
    BranchEnsemble ens;
    for (const auto& e : branches) {
      ens.push_back(WeightedBranch{e.transcript.branch_probability(), &e.state});
    }
    const std::vector<Owner> keep{Owner::B, Owner::EB};
    const DensityMatrix direct = ensemble_reduced(ens, keep);
    // reference: materialize the coherent global state, then trace
    const PureState psi = coherent_state(ens);
    const DensityMatrix ref = psi.reduced(keep);
    CHECK((direct.matrix() - ref.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

    // the cross-Gram fidelity against itself is 1
    CHECK(std::abs(ensemble_reduction_fidelity(ens, ens, keep) - 1.0) <= 1e-10);
    CHECK(ensemble_reduction_trace_distance(ens, ens, keep) <= 1e-8);
  }
}
