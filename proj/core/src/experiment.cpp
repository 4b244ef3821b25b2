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

#include "qbclab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <thread>

#include "qbclab/attack.hpp"
#include "qbclab/ensemble.hpp"
#include "qbclab/protocols.hpp"

namespace qbclab {

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::Enumerate: return "enumerate";
    case RunMode::MonteCarlo: return "montecarlo";
    case RunMode::Both: return "both";
  }
  return "?";
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Audit: return "audit";
    case ExperimentKind::Attack: return "attack";
    case ExperimentKind::Oracle: return "oracle";
  }
  return "?";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "enumerate") return RunMode::Enumerate;
  if (s == "montecarlo") return RunMode::MonteCarlo;
  if (s == "both") return RunMode::Both;
  throw ConfigError("unknown mode '" + s + "' (expected enumerate, montecarlo or both)");
}

double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

Measured Measured::exact_value(double v) { return Measured{true, true, round12(v), 0.0}; }

Measured Measured::estimate(double v, double se) { return Measured{true, false, round12(v), round12(se)}; }

namespace {

// stream-id bases so different metrics never share a trial substream
constexpr std::uint64_t kStreamHonest = 0x0100000000ULL;
constexpr std::uint64_t kStreamCheat = 0x0200000000ULL;
constexpr std::uint64_t kStreamAttack = 0x0300000000ULL;

bool mode_has_exact(RunMode m) { return m != RunMode::MonteCarlo; }
bool mode_has_mc(RunMode m) { return m != RunMode::Enumerate; }

// the generic attack reconstructs Bob's extended reduction; past this
// dimension the synthesis is out of desk-scale budgets
constexpr long kAttackSideDimCap = 1L << 8;

void check_attack_feasible(const std::shared_ptr<const ProtocolSpec>& spec, const ExecOptions& opts) {
  RandomStream probe(0);
  const Execution exec = run_commit(spec, spec->honest_alice, spec->honest_bob, 0, probe, opts);
  long kept = 0;
  for (const auto& r : exec.state.registers()) {
    if (r.owner == Owner::B || r.owner == Owner::EB) ++kept;
  }
  if ((1L << kept) > kAttackSideDimCap) {
    throw ResourceError("attack synthesis needs a " + std::to_string(1L << kept) +
                        "-dimensional reduction; cap is " + std::to_string(kAttackSideDimCap));
  }
}

/// Integer tallies over per-trial substreams, fanned out over `jobs`
/// workers; the reduction is a sum of counts, so scheduling cannot change
/// the result.
std::vector<long> parallel_tally(long trials, int jobs, int classes, std::uint64_t seed,
                                 std::uint64_t stream_base,
                                 const std::function<int(RandomStream&)>& trial_fn) {
  const int workers = std::max(1, jobs);
  std::vector<std::vector<long>> per_worker(static_cast<size_t>(workers),
                                            std::vector<long>(static_cast<size_t>(classes), 0));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      auto& counts = per_worker[static_cast<size_t>(w)];
      for (long i = w; i < trials; i += workers) {
        RandomStream stream(seed, stream_base + static_cast<std::uint64_t>(i));
        const int c = trial_fn(stream);
        ++counts[static_cast<size_t>(c)];
      }
    });
  }
  for (auto& th : pool) th.join();
  std::vector<long> total(static_cast<size_t>(classes), 0);
  for (const auto& counts : per_worker) {
    for (int c = 0; c < classes; ++c) total[static_cast<size_t>(c)] += counts[static_cast<size_t>(c)];
  }
  return total;
}

double binomial_se(double p, long trials) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

struct PointContext {
  const ExperimentConfig& cfg;
  std::shared_ptr<const ProtocolSpec> spec;
  ExecOptions opts;
};

/// Exact honest inconclusive rate by full enumeration (commit then unveil).
double enumerate_bot_rate(const PointContext& pc, int b) {
  double bot = 0.0;
  for (const auto& branch :
       enumerate_branches(pc.spec, pc.spec->honest_alice, pc.spec->honest_bob, b, pc.opts)) {
    for (const auto& ub :
         enumerate_unveil(branch, pc.spec->honest_alice, pc.spec->honest_bob, std::nullopt, pc.opts)) {
      if (ub.result == UnveilResult::Inconclusive) bot += ub.exec.transcript.branch_probability();
    }
  }
  return bot;
}

void fill_audit(PointRecord& rec, const PointContext& pc) {
  const auto audit = audit_concealment(pc.spec, pc.spec->honest_alice, pc.spec->honest_bob, pc.opts);
  rec.concealment_fidelity = Measured::exact_value(audit.expected_fidelity);
  rec.key_marginal_distance = Measured::exact_value(audit.key_marginal_distance);

  const auto h0 = enumerate_branches(pc.spec, pc.spec->honest_alice, pc.spec->honest_bob, 0, pc.opts);
  const auto h1 = enumerate_branches(pc.spec, pc.spec->honest_alice, pc.spec->honest_bob, 1, pc.opts);
  BranchEnsemble e0, e1;
  for (const auto& e : h0) e0.push_back(WeightedBranch{e.transcript.branch_probability(), &e.state});
  for (const auto& e : h1) e1.push_back(WeightedBranch{e.transcript.branch_probability(), &e.state});
  rec.trace_distance_b = Measured::exact_value(
      ensemble_reduction_trace_distance(e0, e1, std::vector<Owner>{Owner::B, Owner::EB}));

  rec.fprime = Measured::exact_value(fidelity_audit(pc.spec, pc.opts).expected);
  rec.honest_bot_rate = Measured::exact_value(enumerate_bot_rate(pc, 0));
}

void fill_mc_honest(PointRecord& rec, const PointContext& pc) {
  const auto counts = parallel_tally(
      pc.cfg.trials, pc.cfg.jobs, 2, pc.cfg.seed, kStreamHonest, [&](RandomStream& stream) {
        const Execution exec =
            run_commit(pc.spec, pc.spec->honest_alice, pc.spec->honest_bob, 0, stream, pc.opts);
        const UnveilResult r =
            run_unveil(exec, pc.spec->honest_alice, pc.spec->honest_bob, stream, std::nullopt, pc.opts);
        return r == UnveilResult::Inconclusive ? 1 : 0;
      });
  const double p = static_cast<double>(counts[1]) / static_cast<double>(pc.cfg.trials);
  rec.mc_honest_bot_rate = Measured::estimate(p, binomial_se(p, pc.cfg.trials));
}

void fill_attack_exact(PointRecord& rec, const PointContext& pc) {
  check_attack_feasible(pc.spec, pc.opts);
  const AttackReport ar = run_attack_enumerated(pc.spec, 1, pc.opts);
  rec.fprime = Measured::exact_value(ar.expected_fprime);
  rec.attack_success_uncond = Measured::exact_value(ar.success_uncond);
  rec.attack_success_cond = Measured::exact_value(ar.success_cond);
  rec.attack_bot_rate = Measured::exact_value(ar.bot_rate);
  rec.bound_f = Measured::exact_value(ar.bound);
  rec.bound_checked = true;
  rec.bound_ok = ar.bound_ok;
  rec.steering_identity_dev = Measured::exact_value(ar.steering_identity_dev);
  double overlap = 0.0, ptot = 0.0;
  for (const auto& g : ar.per_gamma) {
    overlap += g.p_gamma * g.partner_overlap;
    ptot += g.p_gamma;
  }
  rec.partner_overlap = Measured::exact_value(ptot > 0 ? overlap / ptot : 0.0);
}

void fill_attack_mc(PointRecord& rec, const PointContext& pc) {
  check_attack_feasible(pc.spec, pc.opts);
  const AttackReport ar = run_attack_montecarlo(pc.spec, 1, pc.cfg.trials,
                                                pc.cfg.seed ^ kStreamAttack, pc.cfg.jobs, pc.opts);
  rec.mc_attack_success_uncond =
      Measured::estimate(ar.success_uncond, binomial_se(ar.success_uncond, pc.cfg.trials));
  if (!rec.bound_checked) {
    rec.bound_f = Measured::exact_value(ar.bound);
    rec.bound_checked = true;
    rec.bound_ok = ar.bound_ok;
    rec.steering_identity_dev = Measured::exact_value(ar.steering_identity_dev);
    rec.fprime = Measured::exact_value(ar.expected_fprime);
  }
}

void fill_cheat(PointRecord& rec, const PointContext& pc, bool want_exact, bool want_mc) {
  if (want_exact) {
    try {
      rec.cheat_success = Measured::exact_value(classical_guess_success(pc.spec->n, pc.opts));
      if (pc.spec->n <= 3) {
        rec.cheat_success_optimal =
            Measured::exact_value(optimal_classical_guess_success(pc.spec->n, pc.opts));
      }
    } catch (const ResourceError&) {
      if (pc.cfg.mode == RunMode::Enumerate) throw;
    }
  }
  if (want_mc) {
    const Strategy cheat = classical_guess_strategy(pc.spec->n);
    const auto counts = parallel_tally(
        pc.cfg.trials, pc.cfg.jobs, 2, pc.cfg.seed, kStreamCheat, [&](RandomStream& stream) {
          const Execution exec = run_commit(pc.spec, cheat, pc.spec->honest_bob, 0, stream, pc.opts);
          const UnveilResult r = run_unveil(exec, cheat, pc.spec->honest_bob, stream, 1, pc.opts);
          return r == UnveilResult::One ? 1 : 0;
        });
    const double p = static_cast<double>(counts[1]) / static_cast<double>(pc.cfg.trials);
    rec.mc_cheat_success = Measured::estimate(p, binomial_se(p, pc.cfg.trials));
  }
}

void band_check(PointRecord& rec, const ExperimentConfig& cfg) {
  rec.mc_checked = true;
  bool ok = true;
  const auto check = [&](const Measured& exact, const Measured& mc) {
    if (!exact.present || !mc.present) return;
    const double se = binomial_se(exact.value, cfg.trials);
    ok = ok && std::abs(mc.value - exact.value) <= cfg.sigma_band * se + 1e-12;
  };
  check(rec.honest_bot_rate, rec.mc_honest_bot_rate);
  check(rec.cheat_success, rec.mc_cheat_success);
  check(rec.attack_success_uncond, rec.mc_attack_success_uncond);
  rec.mc_within_band = ok;
}

PointRecord build_point(const ExperimentConfig& cfg, const std::string& fixture, double param) {
  PointRecord rec;
  rec.fixture = fixture;
  rec.param_name = fixture == "toy" ? "alpha" : "n";
  rec.param_value = round12(param);

  PointContext pc{cfg, nullptr, ExecOptions{cfg.register_cap, cfg.branch_cap, /*record_log=*/false}};
  if (fixture == "bb84") {
    pc.spec = bb84_protocol(static_cast<int>(param), cfg.register_cap);
  } else if (fixture == "toy") {
    pc.spec = toy_protocol(param, cfg.register_cap);
  } else {
    throw ConfigError("unknown fixture '" + fixture + "' (expected bb84 or toy)");
  }

  const bool want_exact = mode_has_exact(cfg.mode);
  const bool want_mc = mode_has_mc(cfg.mode);

  switch (cfg.kind) {
    case ExperimentKind::Audit: {
      if (want_exact) {
        try {
          fill_audit(rec, pc);
        } catch (const ResourceError&) {
          if (cfg.mode == RunMode::Enumerate) throw;
        }
      }
      if (want_mc) fill_mc_honest(rec, pc);
      break;
    }
    case ExperimentKind::Attack: {
      if (want_exact) {
        try {
          fill_attack_exact(rec, pc);
        } catch (const ResourceError&) {
          if (cfg.mode == RunMode::Enumerate) throw;
        }
      }
      if (want_mc) {
        try {
          fill_attack_mc(rec, pc);
        } catch (const ResourceError&) {
          if (cfg.mode != RunMode::Both) throw;
        }
      }
      if (fixture == "bb84") fill_cheat(rec, pc, want_exact, want_mc);
      break;
    }
    case ExperimentKind::Oracle: {
      if (want_exact) {
        try {
          rec.honest_bot_rate = Measured::exact_value(enumerate_bot_rate(pc, 0));
          fill_attack_exact(rec, pc);
        } catch (const ResourceError&) {
          if (cfg.mode == RunMode::Enumerate) throw;
        }
      }
      if (want_mc) {
        fill_mc_honest(rec, pc);
        try {
          fill_attack_mc(rec, pc);
        } catch (const ResourceError&) {
          if (cfg.mode != RunMode::Both) throw;
        }
      }
      if (fixture == "bb84") fill_cheat(rec, pc, want_exact, want_mc);
      if (want_exact && want_mc) band_check(rec, cfg);
      break;
    }
  }
  return rec;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("trials must be at least 1");
  Report report;
  report.config = config;

  if (config.fixture == "toy") {
    std::vector<double> alphas = config.alpha_values;
    if (alphas.empty()) alphas = {0.0, M_PI / 8, M_PI / 4, 3 * M_PI / 8, M_PI_2};
    for (double a : alphas) report.points.push_back(build_point(config, "toy", a));
  } else if (config.fixture == "bb84") {
    std::vector<int> ns = config.n_values;
    if (ns.empty()) {
      // audits are enumeration-driven; the attack sweeps extend into the
      // sampled range
      const int hi = (config.kind != ExperimentKind::Audit && mode_has_mc(config.mode)) ? 8 : 6;
      for (int n = 1; n <= hi; ++n) ns.push_back(n);
    }
    for (int n : ns) report.points.push_back(build_point(config, "bb84", n));
  } else {
    throw ConfigError("unknown fixture '" + config.fixture + "' (expected bb84 or toy)");
  }
  return report;
}

}  // namespace qbclab
