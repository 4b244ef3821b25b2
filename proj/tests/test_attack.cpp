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

#include "qbclab/attack.hpp"
#include "qbclab/ensemble.hpp"
#include "qbclab/protocols.hpp"
#include "qbclab/spectral.hpp"

using namespace qbclab;

namespace {

BranchEnsemble ensemble_of(const std::vector<Execution>& branches) {
  BranchEnsemble e;
  for (const auto& b : branches) {
    e.push_back(WeightedBranch{b.transcript.branch_probability(), &b.state});
  }
  return e;
}

/// Commitment that just announces the bit during commit: perfectly binding,
/// not concealing at all. A spectator register keeps Bob's side quantum.
std::shared_ptr<const ProtocolSpec> announce_protocol() {
  auto spec = std::make_shared<ProtocolSpec>();
  spec->name = "announce";
  spec->n = 1;
  spec->honest_alice = Strategy{
      "announce-alice",
      [](const StrategyContext&) {
        ActionProgram p;
        p.push_back(ProgramStep::alloc());
        p.push_back(ProgramStep::announce_input());
        p.push_back(ProgramStep::send_register(0));
        return p;
      },
      [](const StrategyContext&) { return ActionProgram{}; },
  };
  spec->honest_bob = passive_bob();
  spec->decode = [](const DecodeView& view) {
    if (view.xi_s.empty()) return UnveilResult::Inconclusive;
    return unveil_of_bit(view.xi_s.front().bit);
  };
  spec->commit_schedule = {Party::Alice};
  spec->unveil_schedule = {Party::Alice, Party::Bob};
  return spec;
}

}  // namespace

TEST_CASE("withholding turns the honest commit into retained entanglement") {
  auto spec = bb84_protocol(1);
  const Strategy cp = commit_prime(spec);

  const auto branches = enumerate_branches(spec, cp, passive_bob(), 0);
  REQUIRE(branches.size() == 1);  // no measurement, no branching
  const Execution& exec = branches[0];
  CHECK(exec.transcript.xi(Party::Alice).empty());

  const double s = 1.0 / std::sqrt(2.0);
  const Eigen::VectorXcd amps = exec.state.materialized_amplitudes();
  CHECK(std::abs(amps(0) - s) <= 1e-12);
  CHECK(std::abs(amps(3) - s) <= 1e-12);
  CHECK(exec.state.find(0).owner == Owner::A);
  CHECK(exec.state.find(1).owner == Owner::B);
}

TEST_CASE("withheld and honest commits are formally identical action sequences") {
  for (int n : {1, 2}) {
    auto spec = bb84_protocol(n);
    const Strategy cp = commit_prime(spec);
    RandomStream r1(5), r2(6);
    const Execution honest = run_commit(spec, spec->honest_alice, passive_bob(), 0, r1);
    const Execution prime = run_commit(spec, cp, passive_bob(), 0, r2);
    CHECK(formally_identical(honest.log, prime.log));

    // Bob's side likewise
    const Strategy cpp_ = commit_double_prime(spec);
    RandomStream r3(7), r4(8);
    const Execution hb = run_commit(spec, spec->honest_alice, spec->honest_bob, 0, r3);
    const Execution wb = run_commit(spec, spec->honest_alice, cpp_, 0, r4);
    // Alice's measurement outcomes differ between runs; compare Bob's slice
    std::vector<LogEntry> hb_bob, wb_bob;
    for (const auto& e : hb.log) {
      if (e.party == Party::Bob) hb_bob.push_back(e);
    }
    for (const auto& e : wb.log) {
      if (e.party == Party::Bob) wb_bob.push_back(e);
    }
    CHECK(formally_identical(hb_bob, wb_bob));

    // a genuinely different program is caught
    std::vector<LogEntry> tampered = hb_bob;
    tampered.front().gate_name = "X";
    CHECK_FALSE(formally_identical(tampered, wb_bob));
  }
}

TEST_CASE("nothing to withhold: derived commit equals the honest one") {
  auto spec = toy_protocol(M_PI / 4);
  const WithholdingPlan plan =
      make_withholding_plan(spec->honest_alice.commit(StrategyContext{1, 0}), Party::Alice);
  CHECK(plan.withheld.empty());
  CHECK(plan.derived.size() == spec->honest_alice.commit(StrategyContext{1, 0}).size());

  const Strategy cp = commit_prime(spec);
  const auto honest = enumerate_branches(spec, spec->honest_alice, spec->honest_bob, 0);
  const auto prime = enumerate_branches(spec, cp, spec->honest_bob, 0);
  REQUIRE(honest.size() == 1);
  REQUIRE(prime.size() == 1);
  CHECK(std::abs(std::abs(honest[0].state.materialized().overlap(prime[0].state.materialized())) -
                 1.0) <= 1e-12);
}

TEST_CASE("transmitted bits stay classical under withholding") {
  auto spec = announce_protocol();
  const Strategy cp = commit_prime(spec);
  const auto branches = enumerate_branches(spec, cp, passive_bob(), 0);
  REQUIRE(branches.size() == 1);
  CHECK(branches[0].transcript.xi_s_string() == "0");  // the announce still happened
}

TEST_CASE("withheld commits leave no private randomness behind") {
  for (int n : {1, 2, 3}) {
    auto spec = bb84_protocol(n);
    const Strategy cp = commit_prime(spec);
    for (const auto& e : enumerate_branches(spec, cp, spec->honest_bob, 0)) {
      CHECK(e.transcript.xi(Party::Alice).empty());
    }
  }
}

TEST_CASE("both withholding sides give the same Bob-side matrix") {
  // Alice withholds against an honest Bob: reduce to his area plus his
  // environment store. Bob withholds against an honest Alice: reduce to his
  // area alone. The two matrices must coincide entry for entry.
  for (int n : {1, 2, 3}) {
    auto spec = bb84_protocol(n);
    for (int b = 0; b < 2; ++b) {
      const auto prime =
          enumerate_branches(spec, withholding_strategy(spec, Party::Alice), spec->honest_bob, b);
      const auto dprime =
          enumerate_branches(spec, spec->honest_alice, commit_double_prime(spec), b);
      const DensityMatrix rho_prime = ensemble_reduced(ensemble_of(prime), {Owner::B, Owner::EB});
      const DensityMatrix rho_dprime = ensemble_reduced(ensemble_of(dprime), {Owner::B});
      REQUIRE(rho_prime.dim() == rho_dprime.dim());
      CHECK((rho_prime.matrix() - rho_dprime.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("fidelity audit: fully concealing and tunably leaky fixtures") {
  for (int n : {1, 2, 3}) {
    CHECK(std::abs(fidelity_audit(bb84_protocol(n)).expected - 1.0) <= 1e-9);
  }
  for (double alpha : {0.0, M_PI / 8, M_PI / 4, 3 * M_PI / 8, M_PI_2}) {
    CHECK(std::abs(fidelity_audit(toy_protocol(alpha)).expected - std::cos(alpha)) <= 1e-9);
  }
}

TEST_CASE("success_lower_bound endpoints") {
  CHECK(success_lower_bound(1.0) == 1.0);
  CHECK(success_lower_bound(0.0) == 0.0);
  CHECK(success_lower_bound(std::cos(M_PI / 4)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("synthesized unveil on the concealing fixture: identity steering, certain success") {
  for (int n : {1, 2, 3}) {
    auto spec = bb84_protocol(n);
    for (int target = 0; target < 2; ++target) {
      const AttackReport report = run_attack_enumerated(spec, target);
      CHECK(std::abs(report.expected_fprime - 1.0) <= 1e-9);
      CHECK(report.steering_identity_dev <= 1e-8);
      CHECK(std::abs(report.success_cond - 1.0) <= 1e-9);
      CHECK(std::abs(report.bot_rate - std::pow(0.75, n)) <= 1e-9);
      CHECK(report.bound_ok);
      for (const auto& g : report.per_gamma) {
        CHECK(g.partner_overlap >= g.fprime - 1e-9);
        CHECK(g.success_cond >= g.partner_overlap * g.partner_overlap - 1e-9);
      }
    }
  }
}

TEST_CASE("synthesized unveil on the leaky fixture: the overlap chain is tight") {
  for (double alpha : {0.0, M_PI / 8, M_PI / 4, 3 * M_PI / 8, M_PI_2}) {
    auto spec = toy_protocol(alpha);
    const AttackReport report = run_attack_enumerated(spec, 1);
    const double c = std::cos(alpha);
    CHECK(std::abs(report.expected_fprime - c) <= 1e-9);
    CHECK(std::abs(report.success_uncond - c * c) <= 1e-9);
    CHECK(report.bound_ok);
    for (const auto& g : report.per_gamma) {
      CHECK(std::abs(g.partner_overlap - c) <= 1e-9);  // equality case of the overlap bound
      CHECK(g.success_cond >= success_lower_bound(g.fprime) - 1e-9);
    }
  }
}

TEST_CASE("impossible transcripts abort to the committed bit") {
  auto spec = announce_protocol();
  const AttackReport r1 = run_attack_enumerated(spec, 1);
  CHECK(r1.expected_fprime == 0.0);
  CHECK(r1.success_uncond == 0.0);
  CHECK(r1.bound == 0.0);
  CHECK(r1.bound_ok);
  REQUIRE(r1.per_gamma.size() == 1);
  CHECK(r1.per_gamma[0].aborted);

  const AttackReport r0 = run_attack_enumerated(spec, 0);
  CHECK(std::abs(r0.success_uncond - 1.0) <= 1e-12);  // unveiling the pinned bit still works
}

TEST_CASE("monte carlo attack agrees with enumeration") {
  auto spec = bb84_protocol(2);
  const AttackReport mc = run_attack_montecarlo(spec, 1, 2000, 321, 2);
  CHECK(mc.success_cond == doctest::Approx(1.0));  // every conclusive run decodes the new bit
  CHECK(mc.bound_ok);
  const double expect = 1.0 - std::pow(0.75, 2);
  CHECK(std::abs(mc.success_uncond - expect) <= 4.0 * std::sqrt(expect * (1 - expect) / 2000));

  auto toy = toy_protocol(M_PI / 4);
  const AttackReport tmc = run_attack_montecarlo(toy, 1, 2000, 321, 2);
  CHECK(std::abs(tmc.success_uncond - 0.5) <= 4.0 * std::sqrt(0.25 / 2000));
}
