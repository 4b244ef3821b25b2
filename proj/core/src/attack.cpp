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

#include "qbclab/attack.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "qbclab/ensemble.hpp"
#include "qbclab/spectral.hpp"

namespace qbclab {

namespace {

const std::vector<Owner> kBobExtended{Owner::B, Owner::EB};
const std::vector<Owner> kAliceSide{Owner::A};

/// Private-bit indices referenced by classical sends (those measurements
/// must stay classical: their bits leave via the transcript).
std::set<int> transmitted_bits(const ActionProgram& prog) {
  std::set<int> out;
  int produced = 0;
  for (const auto& step : prog) {
    switch (step.kind) {
      case ProgramStep::Kind::Measure:
        ++produced;
        break;
      case ProgramStep::Kind::SendClassical:
        if (step.bit_source.kind == ProgramStep::BitSource::Kind::PrivateBit) {
          out.insert(step.bit_source.index);
        }
        if (step.bit_source.kind == ProgramStep::BitSource::Kind::Input || step.bit_source.negate) {
          ++produced;  // announcing records a fresh choice bit
        }
        break;
      default:
        break;
    }
  }
  (void)produced;
  return out;
}

}  // namespace

WithholdingPlan make_withholding_plan(const ActionProgram& honest_commit, Party party) {
  WithholdingPlan plan;
  plan.party = party;
  const std::set<int> keep = transmitted_bits(honest_commit);

  // first pass: decide the fate of every produced bit
  std::map<int, WithholdingPlan::Withheld> withheld_bit;
  {
    int bit = 0;
    for (const auto& step : honest_commit) {
      if (step.kind == ProgramStep::Kind::Measure) {
        if (!keep.count(bit)) {
          withheld_bit[bit] = WithholdingPlan::Withheld{step.slot, step.basis, bit};
        }
        ++bit;
      } else if (step.kind == ProgramStep::Kind::SendClassical &&
                 (step.bit_source.kind == ProgramStep::BitSource::Kind::Input ||
                  step.bit_source.negate)) {
        ++bit;
      }
    }
    plan.honest_bits = bit;
  }

  plan.bit_remap.assign(static_cast<size_t>(plan.honest_bits), -1);
  int honest_bit = 0;
  int derived_bit = 0;

  const auto remap_control = [&](const std::optional<StepControl>& c) -> std::optional<StepControl> {
    if (!c || c->kind != StepControl::Kind::PrivateBit) return c;
    auto it = withheld_bit.find(c->index);
    if (it == withheld_bit.end()) {
      const int mapped = plan.bit_remap[static_cast<size_t>(c->index)];
      if (mapped < 0) {
        throw ProtocolViolation("withholding: control reads a bit that does not exist yet");
      }
      return StepControl{StepControl::Kind::PrivateBit, mapped, Basis::Plus};
    }
    // the bit was never created: control coherently on the retained register
    return StepControl{StepControl::Kind::OwnRegisterSlot, it->second.slot, it->second.basis};
  };

  for (const auto& step : honest_commit) {
    switch (step.kind) {
      case ProgramStep::Kind::Measure: {
        if (withheld_bit.count(honest_bit)) {
          plan.withheld.push_back(withheld_bit[honest_bit]);
          plan.derived.push_back(ProgramStep::retain(step.slot, step.basis));
        } else {
          plan.bit_remap[static_cast<size_t>(honest_bit)] = derived_bit++;
          plan.derived.push_back(step);
        }
        ++honest_bit;
        break;
      }
      case ProgramStep::Kind::Gate: {
        ProgramStep g = step;
        g.control = remap_control(step.control);
        plan.derived.push_back(std::move(g));
        break;
      }
      case ProgramStep::Kind::SendClassical: {
        ProgramStep s = step;
        if (step.bit_source.kind == ProgramStep::BitSource::Kind::PrivateBit) {
          const int mapped = plan.bit_remap[static_cast<size_t>(step.bit_source.index)];
          if (mapped < 0) {
            throw ProtocolViolation("withholding: program transmits a bit marked for retention");
          }
          s.bit_source.index = mapped;
          if (step.bit_source.negate) {
            plan.bit_remap[static_cast<size_t>(honest_bit++)] = derived_bit++;
          }
        } else {
          plan.bit_remap[static_cast<size_t>(honest_bit++)] = derived_bit++;
        }
        plan.derived.push_back(std::move(s));
        break;
      }
      default:
        plan.derived.push_back(step);
        break;
    }
  }
  plan.derived_bits = derived_bit;
  return plan;
}

ActionProgram deferred_honest_unveil(const ProtocolSpec& spec, Party party, int target) {
  const Strategy& honest = party == Party::Alice ? spec.honest_alice : spec.honest_bob;
  const StrategyContext ctx{spec.n, target & 1};
  const WithholdingPlan plan = make_withholding_plan(honest.commit(ctx), party);

  ActionProgram out;
  std::vector<int> runtime = plan.bit_remap;  // honest bit index -> runtime index
  int next = plan.derived_bits;
  for (const auto& w : plan.withheld) {
    out.push_back(ProgramStep::measure(w.slot, w.basis));
    runtime[static_cast<size_t>(w.original_bit)] = next++;
  }

  int honest_next = plan.honest_bits;
  for (const auto& step : honest.unveil(ctx)) {
    ProgramStep s = step;
    if (step.kind == ProgramStep::Kind::SendClassical) {
      if (step.bit_source.kind == ProgramStep::BitSource::Kind::PrivateBit) {
        const int j = step.bit_source.index;
        if (j < 0 || j >= static_cast<int>(runtime.size()) || runtime[static_cast<size_t>(j)] < 0) {
          throw ProtocolViolation("deferred unveil: honest program references an unknown bit");
        }
        s.bit_source.index = runtime[static_cast<size_t>(j)];
        if (step.bit_source.negate) {
          runtime.push_back(next++);
          ++honest_next;
        }
      } else {
        runtime.push_back(next++);
        ++honest_next;
      }
    } else if (step.kind == ProgramStep::Kind::Measure) {
      runtime.push_back(next++);
      ++honest_next;
    } else if (step.kind == ProgramStep::Kind::Gate && step.control &&
               step.control->kind == StepControl::Kind::PrivateBit) {
      const int j = step.control->index;
      if (j < 0 || j >= static_cast<int>(runtime.size()) || runtime[static_cast<size_t>(j)] < 0) {
        throw ProtocolViolation("deferred unveil: control references an unknown bit");
      }
      s.control = StepControl{StepControl::Kind::PrivateBit, runtime[static_cast<size_t>(j)], Basis::Plus};
    }
    out.push_back(std::move(s));
  }
  return out;
}

Strategy withholding_strategy(const std::shared_ptr<const ProtocolSpec>& spec, Party party) {
  Strategy s;
  const Strategy honest = party == Party::Alice ? spec->honest_alice : spec->honest_bob;
  s.name = honest.name + "-withheld";
  s.commit = [spec, party, honest](const StrategyContext& ctx) {
    return make_withholding_plan(honest.commit(ctx), party).derived;
  };
  s.unveil = [spec, party](const StrategyContext& ctx) {
    return deferred_honest_unveil(*spec, party, ctx.b);
  };
  return s;
}

Strategy commit_prime(const std::shared_ptr<const ProtocolSpec>& spec) {
  Strategy base = withholding_strategy(spec, Party::Alice);
  Strategy s;
  s.name = "commit-prime";
  s.commit = [base](const StrategyContext& ctx) {
    return base.commit(StrategyContext{ctx.n, 0});  // the committed bit is always 0
  };
  s.unveil = base.unveil;
  return s;
}

Strategy commit_double_prime(const std::shared_ptr<const ProtocolSpec>& spec) {
  Strategy base = withholding_strategy(spec, Party::Bob);
  Strategy s;
  s.name = "commit-double-prime";
  s.commit = [base](const StrategyContext& ctx) { return base.commit(StrategyContext{ctx.n, ctx.b}); };
  s.unveil = base.unveil;
  return s;
}

bool formally_identical(const std::vector<LogEntry>& honest, const std::vector<LogEntry>& derived) {
  if (honest.size() != derived.size()) return false;
  for (size_t i = 0; i < honest.size(); ++i) {
    const LogEntry& h = honest[i];
    const LogEntry& d = derived[i];
    if (h.party != d.party) return false;
    const bool measure_like_h =
        h.kind == ProgramStep::Kind::Measure || h.kind == ProgramStep::Kind::Retain;
    const bool measure_like_d =
        d.kind == ProgramStep::Kind::Measure || d.kind == ProgramStep::Kind::Retain;
    if (measure_like_h != measure_like_d) return false;
    if (measure_like_h) {
      if (h.slots != d.slots || h.basis != d.basis) return false;
      continue;  // a retention is the measurement with its register relabeled
    }
    if (h.kind != d.kind || h.gate_name != d.gate_name || h.slots != d.slots) return false;
    if (h.control.has_value() != d.control.has_value()) return false;
    if (h.control && h.control->kind == d.control->kind) {
      if (h.control->index != d.control->index) return false;
    }
  }
  return true;
}

double success_lower_bound(double fidelity_value) { return fidelity_value * fidelity_value; }

namespace {

struct GammaGroups {
  std::map<std::string, std::vector<const Execution*>> by_gamma;
  std::map<std::string, double> p_gamma;
};

GammaGroups group_by_gamma(const std::vector<Execution>& branches) {
  GammaGroups g;
  for (const auto& e : branches) {
    g.by_gamma[e.transcript.gamma_key()].push_back(&e);
    g.p_gamma[e.transcript.gamma_key()] += e.transcript.branch_probability();
  }
  return g;
}

BranchEnsemble ensemble_of(const std::vector<const Execution*>& execs) {
  BranchEnsemble e;
  for (const Execution* x : execs) {
    e.push_back(WeightedBranch{x->transcript.branch_probability(), &x->state});
  }
  return e;
}

double identity_deviation(const Eigen::MatrixXcd& u) {
  cxd phase = u(0, 0);
  if (std::abs(phase) < 0.5) return 2.0;  // nowhere near a phase of identity
  phase /= std::abs(phase);
  return (u - phase * Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

FidelityAudit fidelity_audit(const std::shared_ptr<const ProtocolSpec>& spec, const ExecOptions& opts) {
  ExecOptions quiet = opts;
  quiet.record_log = false;
  const Strategy withheld = withholding_strategy(spec, Party::Alice);
  const auto b0 = enumerate_branches(spec, withheld, spec->honest_bob, 0, quiet);
  const auto b1 = enumerate_branches(spec, withheld, spec->honest_bob, 1, quiet);
  const GammaGroups g0 = group_by_gamma(b0);
  const GammaGroups g1 = group_by_gamma(b1);

  FidelityAudit audit;
  std::set<std::string> keys;
  for (const auto& [k, v] : g0.p_gamma) {
    (void)v;
    keys.insert(k);
  }
  for (const auto& [k, v] : g1.p_gamma) {
    (void)v;
    keys.insert(k);
  }
  for (const auto& key : keys) {
    const double p0 = g0.p_gamma.count(key) ? g0.p_gamma.at(key) : 0.0;
    const double p1 = g1.p_gamma.count(key) ? g1.p_gamma.at(key) : 0.0;
    double f = 0.0;  // a transcript reachable under only one bit reveals it
    if (p0 > 0.0 && p1 > 0.0) {
      f = ensemble_reduction_fidelity(ensemble_of(g0.by_gamma.at(key)),
                                      ensemble_of(g1.by_gamma.at(key)), kBobExtended);
    }
    audit.per_gamma.emplace_back(key, f);
    audit.expected += f * (p0 + p1) / 2.0;
  }
  return audit;
}

SynthesizedUnveil synthesize_unveil_prime(const Execution& exec, int target, const ExecOptions& opts) {
  const auto spec = exec.spec;
  const std::string gamma = exec.transcript.gamma_key();
  const Strategy withheld = withholding_strategy(spec, Party::Alice);
  const Strategy cp = commit_prime(spec);

  SynthesizedUnveil out;

  ExecOptions quiet = opts;
  quiet.record_log = false;
  const auto committed = enumerate_branches(spec, cp, spec->honest_bob, 0, quiet);
  const auto target_run = enumerate_branches(spec, withheld, spec->honest_bob, target, quiet);

  std::vector<const Execution*> g_committed, g_target;
  for (const auto& e : committed) {
    if (e.transcript.gamma_key() == gamma) g_committed.push_back(&e);
  }
  for (const auto& e : target_run) {
    if (e.transcript.gamma_key() == gamma) g_target.push_back(&e);
  }
  if (g_committed.empty()) {
    throw ProtocolViolation("synthesize_unveil_prime: transcript unreachable under the committed run");
  }

  if (g_target.empty()) {
    // the observed transcript cannot occur under the target bit; fall back
    // to unveiling the bit actually committed
    out.aborted = true;
    out.fprime = 0.0;
    out.partner_overlap = 0.0;
    out.strategy.name = "unveil-prime-aborted";
    out.strategy.commit = cp.commit;
    out.strategy.unveil = [spec](const StrategyContext&) {
      return deferred_honest_unveil(*spec, Party::Alice, 0);
    };
    return out;
  }

  const PureState psi0 = coherent_state(ensemble_of(g_committed));
  const PureState psi_target = coherent_state(ensemble_of(g_target));

  const DensityMatrix rho0 = psi0.reduced(kBobExtended);
  const DensityMatrix rho_t = psi_target.reduced(kBobExtended);
  out.fprime = fidelity(rho0, rho_t).value;

  const PureState psi01 = uhlmann_partner(rho0, psi_target, kAliceSide);
  out.partner_overlap = psi01.overlap(psi_target).real();

  const Unitary steer = steering_unitary(psi0, psi01, kAliceSide);
  out.steering_identity_dev = identity_deviation(steer.matrix());

  // register ids -> Alice's acquisition slots
  std::vector<int> slots;
  for (RegisterId id : steer.targets()) {
    const auto& acq = exec.acquired_of(Party::Alice);
    const auto it = std::find(acq.begin(), acq.end(), id);
    if (it == acq.end()) {
      throw ProtocolViolation("synthesize_unveil_prime: steering target is not Alice's register");
    }
    slots.push_back(static_cast<int>(it - acq.begin()));
  }

  ActionProgram unveil;
  unveil.push_back(ProgramStep::apply("steer", steer.matrix(), slots));
  for (const auto& step : deferred_honest_unveil(*spec, Party::Alice, target)) unveil.push_back(step);

  out.strategy.name = "unveil-prime";
  out.strategy.commit = cp.commit;
  out.strategy.unveil = [unveil](const StrategyContext&) { return unveil; };
  return out;
}

namespace {

struct Tally {
  long success = 0;
  long bot = 0;
  long other = 0;
  long total() const { return success + bot + other; }
};

void finalize_report(AttackReport& report) {
  double succ = 0.0, bot = 0.0, total = 0.0, fexp = 0.0, dev = 0.0;
  for (const auto& g : report.per_gamma) {
    succ += g.p_gamma * g.success_uncond;
    bot += g.p_gamma * g.bot_rate;
    fexp += g.p_gamma * g.fprime;
    total += g.p_gamma;
    dev = std::max(dev, g.steering_identity_dev);
  }
  if (total > 0) {
    report.success_uncond = succ / total;
    report.bot_rate = bot / total;
    report.expected_fprime = fexp / total;
  }
  const double not_bot = 1.0 - report.bot_rate;
  report.success_cond = not_bot > tol::kProbability ? report.success_uncond / not_bot : 0.0;
  report.bound = success_lower_bound(report.expected_fprime);
  report.steering_identity_dev = dev;
  report.bound_ok = true;
  for (const auto& g : report.per_gamma) report.bound_ok = report.bound_ok && g.bound_ok;
}

}  // namespace

AttackReport run_attack_enumerated(const std::shared_ptr<const ProtocolSpec>& spec, int target,
                                   const ExecOptions& opts) {
  AttackReport report;
  report.target = target;
  report.exact = true;

  const Strategy cp = commit_prime(spec);
  const auto committed = enumerate_branches(spec, cp, spec->honest_bob, 0, opts);
  const GammaGroups groups = group_by_gamma(committed);

  for (const auto& [gamma, execs] : groups.by_gamma) {
    const SynthesizedUnveil synth = synthesize_unveil_prime(*execs.front(), target, opts);
    AttackGammaStats st;
    st.gamma = gamma;
    st.p_gamma = groups.p_gamma.at(gamma);
    st.fprime = synth.fprime;
    st.partner_overlap = synth.partner_overlap;
    st.steering_identity_dev = synth.steering_identity_dev;
    st.aborted = synth.aborted;

    double p_succ = 0.0, p_bot = 0.0, p_all = 0.0;
    for (const Execution* e : execs) {
      for (const auto& ub : enumerate_unveil(*e, synth.strategy, spec->honest_bob, target, opts)) {
        const double p = ub.exec.transcript.branch_probability();
        p_all += p;
        if (ub.result == unveil_of_bit(target)) {
          p_succ += p;
        } else if (ub.result == UnveilResult::Inconclusive) {
          p_bot += p;
        }
      }
    }
    st.success_uncond = p_all > 0 ? p_succ / p_all : 0.0;
    st.bot_rate = p_all > 0 ? p_bot / p_all : 0.0;
    const double not_bot = 1.0 - st.bot_rate;
    st.success_cond = not_bot > tol::kProbability ? st.success_uncond / not_bot : 0.0;
    st.bound = success_lower_bound(st.fprime);
    st.bound_ok = st.success_cond >= st.bound - tol::kSpectra;
    report.per_gamma.push_back(std::move(st));
  }
  finalize_report(report);
  return report;
}

AttackReport run_attack_montecarlo(const std::shared_ptr<const ProtocolSpec>& spec, int target,
                                   long trials, std::uint64_t root_seed, int jobs,
                                   const ExecOptions& opts) {
  AttackReport report;
  report.target = target;
  report.exact = false;
  report.trials = trials;

  const Strategy cp = commit_prime(spec);

  // synthesis cache shared across trials; prepared up front from one
  // enumeration pass so worker threads only read it
  std::map<std::string, SynthesizedUnveil> cache;
  {
    const auto committed = enumerate_branches(spec, cp, spec->honest_bob, 0, opts);
    const GammaGroups groups = group_by_gamma(committed);
    for (const auto& [gamma, execs] : groups.by_gamma) {
      cache.emplace(gamma, synthesize_unveil_prime(*execs.front(), target, opts));
    }
  }

  const int workers = std::max(1, jobs);
  std::vector<Tally> tallies(static_cast<size_t>(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      Tally& t = tallies[static_cast<size_t>(w)];
      for (long i = w; i < trials; i += workers) {
        RandomStream stream(root_seed, static_cast<std::uint64_t>(i));
        const Execution exec = run_commit(spec, cp, spec->honest_bob, 0, stream, opts);
        const auto& synth = cache.at(exec.transcript.gamma_key());
        const UnveilResult r = run_unveil(exec, synth.strategy, spec->honest_bob, stream, target, opts);
        if (r == unveil_of_bit(target)) {
          ++t.success;
        } else if (r == UnveilResult::Inconclusive) {
          ++t.bot;
        } else {
          ++t.other;
        }
      }
    });
  }
  for (auto& th : pool) th.join();

  Tally total;
  for (const auto& t : tallies) {
    total.success += t.success;
    total.bot += t.bot;
    total.other += t.other;
  }

  double fexp = 0.0, dev = 0.0;
  {
    const auto committed = enumerate_branches(spec, cp, spec->honest_bob, 0, opts);
    const GammaGroups groups = group_by_gamma(committed);
    for (const auto& [gamma, p] : groups.p_gamma) {
      const auto& synth = cache.at(gamma);
      fexp += p * synth.fprime;
      dev = std::max(dev, synth.steering_identity_dev);
    }
  }

  report.expected_fprime = fexp;
  report.steering_identity_dev = dev;
  report.success_uncond = static_cast<double>(total.success) / static_cast<double>(trials);
  report.bot_rate = static_cast<double>(total.bot) / static_cast<double>(trials);
  const long not_bot = total.success + total.other;
  report.success_cond =
      not_bot > 0 ? static_cast<double>(total.success) / static_cast<double>(not_bot) : 0.0;
  report.bound = success_lower_bound(report.expected_fprime);
  const double se = std::sqrt(std::max(report.success_cond * (1 - report.success_cond), 1e-12) /
                              static_cast<double>(trials));
  report.bound_ok = report.success_cond >= report.bound - 4.0 * se - 1e-9;
  return report;
}

}  // namespace qbclab
