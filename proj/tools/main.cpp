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

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "qbclab/attack.hpp"
#include "qbclab/experiment.hpp"
#include "qbclab/protocols.hpp"
#include "qbclab/report_io.hpp"
#include "qbclab/spectral.hpp"

namespace {

using namespace qbclab;

struct CliOptions {
  ExperimentConfig config;
  std::string mode = "both";
  std::string format = "both";
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--fixture", opt.config.fixture, "Protocol fixture: bb84 or toy")
      ->default_val("bb84");
  cmd->add_option("--n", opt.config.n_values, "Security parameter sweep for bb84 (repeatable)")
      ->delimiter(',');
  cmd->add_option("--alpha", opt.config.alpha_values, "Coding angle sweep for toy (repeatable)")
      ->delimiter(',');
  cmd->add_option("--trials", opt.config.trials, "Monte Carlo trials per sweep point")
      ->default_val(10000);
  cmd->add_option("--seed", opt.config.seed, "Root seed for the trial substreams")->default_val(1);
  cmd->add_option("--mode", opt.mode, "enumerate, montecarlo or both")->default_val("both");
  cmd->add_option("--out", opt.config.out_dir, "Output directory for report files")->default_val(".");
  cmd->add_option("--format", opt.format, "Report format: json, csv or both")->default_val("both");
  cmd->add_option("--jobs", opt.config.jobs, "Worker threads for Monte Carlo trials")->default_val(1);
  cmd->add_option("--register-cap", opt.config.register_cap, "Live register (qubit) cap")
      ->default_val(kDefaultRegisterCap);
  cmd->add_option("--branch-cap", opt.config.branch_cap, "Enumeration branch cap")
      ->default_val(1L << 20);
}

int run_configured(CliOptions& opt, ExperimentKind kind) {
  opt.config.kind = kind;
  opt.config.mode = run_mode_from_string(opt.mode);
  const ReportFormat format = report_format_from_string(opt.format);

  const auto t0 = std::chrono::steady_clock::now();
  const Report report = run_experiment(opt.config);
  const auto paths = emit_report(report, opt.config.out_dir, format);
  const auto t1 = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  for (const auto& p : report.points) {
    std::printf("%s %s=%-8g", p.fixture.c_str(), p.param_name.c_str(), p.param_value);
    if (p.concealment_fidelity.present)
      std::printf("  E[F]=%.9f", p.concealment_fidelity.value);
    if (p.fprime.present) std::printf("  F'=%.9f", p.fprime.value);
    if (p.honest_bot_rate.present) std::printf("  bot=%.9f", p.honest_bot_rate.value);
    if (p.attack_success_cond.present)
      std::printf("  attack(cond)=%.9f", p.attack_success_cond.value);
    if (p.mc_attack_success_uncond.present)
      std::printf("  attack~%.5f(%.5f)", p.mc_attack_success_uncond.value,
                  p.mc_attack_success_uncond.stderror);
    if (p.cheat_success.present) std::printf("  cheat=%.9f", p.cheat_success.value);
    if (p.mc_cheat_success.present)
      std::printf("  cheat~%.5f(%.5f)", p.mc_cheat_success.value, p.mc_cheat_success.stderror);
    if (p.bound_checked) std::printf("  f(F')=%.6f %s", p.bound_f.value, p.bound_ok ? "ok" : "VIOLATED");
    if (p.mc_checked) std::printf("  band=%s", p.mc_within_band ? "ok" : "OUT");
    std::printf("\n");
  }
  for (const auto& path : paths) std::printf("wrote %s\n", path.c_str());
  std::printf("wall clock: %.1f ms (timing is not part of the report files)\n", ms);
  return 0;
}

int run_demo(int n) {
  std::printf("BB84 commitment, one position (committed bit coded rectilinear for 0, diagonal for 1)\n\n");

  // honest commit of 0, just before the random-bit register is read out:
  // the record register is bound for Alice's environment
  PureState honest = zero_state(2, {Owner::EA, Owner::B});
  honest = honest.applied(Unitary(gates::hadamard(), {0}, "H"));
  honest = honest.applied(Unitary(gates::cnot(), {0, 1}, "CX"));
  std::printf("honest commit(0), record register headed to the environment:\n%s\n",
              honest.pretty().c_str());

  PureState withheld0 = zero_state(2, {Owner::A, Owner::B});
  withheld0 = withheld0.applied(Unitary(gates::hadamard(), {0}, "H"));
  withheld0 = withheld0.applied(Unitary(gates::cnot(), {0, 1}, "CX"));
  std::printf("withholding commit (cheating Alice keeps the record register coherent):\n%s\n",
              withheld0.pretty().c_str());

  PureState withheld1 = withheld0.applied(Unitary(gates::hadamard(), {0}, "H"));
  withheld1 = withheld1.applied(Unitary(gates::hadamard(), {1}, "H"));
  std::printf("state she would need for unveiling 1 (same preparation, diagonal coding):\n%s\n",
              withheld1.pretty().c_str());

  const Unitary steer = steering_unitary(withheld0, withheld1, {Owner::A});
  const double dev = (steer.matrix() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff();
  std::printf("steering unitary on Alice's side mapping one onto the other:\n");
  std::printf("  [% .6f%+.6fi  % .6f%+.6fi]\n", steer.matrix()(0, 0).real(), steer.matrix()(0, 0).imag(),
              steer.matrix()(0, 1).real(), steer.matrix()(0, 1).imag());
  std::printf("  [% .6f%+.6fi  % .6f%+.6fi]\n", steer.matrix()(1, 0).real(), steer.matrix()(1, 0).imag(),
              steer.matrix()(1, 1).real(), steer.matrix()(1, 1).imag());
  std::printf("  deviation from identity: %.3e (the two targets are one and the same state)\n\n", dev);

  std::printf("generic attack on bb84 with n=%d, synthesized from the protocol alone:\n", n);
  const auto spec = bb84_protocol(n);
  for (int target = 0; target < 2; ++target) {
    const AttackReport ar = run_attack_enumerated(spec, target);
    std::printf(
        "  unveil %d: F'=%.9f  success|not-inconclusive=%.9f  inconclusive=%.6f  f(F')=%.6f  "
        "steering dev=%.3e\n",
        target, ar.expected_fprime, ar.success_cond, ar.bot_rate, ar.bound,
        ar.steering_identity_dev);
  }
  std::printf("\nhonest Bob cannot tell: his reduced state is maximally mixed either way.\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qbclab: a bit-commitment protocol simulator and attack laboratory"};
  app.require_subcommand(1);

  CliOptions audit_opt, attack_opt, oracle_opt;
  CLI::App* audit = app.add_subcommand("audit", "Concealment audit across a sweep");
  add_common_options(audit, audit_opt);
  CLI::App* attack = app.add_subcommand("attack", "Binding/attack sweep with the generic cheat");
  add_common_options(attack, attack_opt);
  CLI::App* oracle = app.add_subcommand("oracle", "Monte Carlo versus exact enumeration cross-check");
  add_common_options(oracle, oracle_opt);

  int demo_n = 1;
  CLI::App* demo = app.add_subcommand("demo-bb84", "Walk through the entangled-commit cheat states");
  demo->add_option("--n", demo_n, "Positions for the synthesized-attack summary")->default_val(1);

  try {
    app.parse(argc, argv);
    if (audit->parsed()) return run_configured(audit_opt, qbclab::ExperimentKind::Audit);
    if (attack->parsed()) return run_configured(attack_opt, qbclab::ExperimentKind::Attack);
    if (oracle->parsed()) return run_configured(oracle_opt, qbclab::ExperimentKind::Oracle);
    if (demo->parsed()) return run_demo(demo_n);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const qbclab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const qbclab::ResourceError& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    std::cerr << "hint: retry with --mode montecarlo or raise the cap\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
