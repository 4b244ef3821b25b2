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

#include "qbclab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qbclab/spectral.hpp"

namespace qbclab {

namespace {

bool owner_in(const std::vector<Owner>& set, Owner o) {
  return std::find(set.begin(), set.end(), o) != set.end();
}

void check_same_structure(const PureState& a, const PureState& b) {
  const auto& ra = a.registers();
  const auto& rb = b.registers();
  if (ra.size() != rb.size()) throw InvariantError("ensemble: register lists differ in size");
  for (size_t i = 0; i < ra.size(); ++i) {
    if (ra[i].id != rb[i].id || ra[i].owner != rb[i].owner || ra[i].consumed != rb[i].consumed) {
      throw InvariantError("ensemble: branches have incompatible register layouts");
    }
  }
}

/// Splits a register layout into kept/traced parts for one owner set and
/// precomputes the bit bookkeeping shared by every branch of the ensemble.
struct ReductionLayout {
  std::vector<int> kept_pos;              // kept register positions, state order
  int kept_bits = 0;                      // total kept index width
  std::vector<int> live_kept;             // live-order indices of live kept registers
  std::vector<int> live_traced;           // live-order indices of the other live registers
  std::vector<int> kept_bit_of_live;      // kept-index bit slot per live_kept entry
  std::vector<int> kept_bit_of_consumed;  // kept-index bit slot per consumed kept register
  std::vector<int> consumed_kept_pos;     // register positions of consumed kept registers
  std::vector<int> consumed_traced_pos;   // register positions of consumed traced registers

  ReductionLayout(const PureState& exemplar, const std::vector<Owner>& keep) {
    const auto& regs = exemplar.registers();
    std::vector<int> live_of_pos(regs.size(), -1);
    int live = 0;
    for (int i = 0; i < static_cast<int>(regs.size()); ++i) {
      if (!regs[i].consumed) live_of_pos[i] = live++;
    }
    for (int i = 0; i < static_cast<int>(regs.size()); ++i) {
      if (owner_in(keep, regs[i].owner)) kept_pos.push_back(i);
    }
    kept_bits = static_cast<int>(kept_pos.size());
    if (kept_bits > 62) throw ResourceError("ensemble reduction: kept index exceeds 62 bits");

    std::vector<bool> live_is_kept(static_cast<size_t>(live), false);
    for (int kslot = 0; kslot < kept_bits; ++kslot) {
      const int pos = kept_pos[kslot];
      if (regs[pos].consumed) {
        consumed_kept_pos.push_back(pos);
        kept_bit_of_consumed.push_back(kept_bits - 1 - kslot);
      } else {
        live_kept.push_back(live_of_pos[pos]);
        kept_bit_of_live.push_back(kept_bits - 1 - kslot);
        live_is_kept[static_cast<size_t>(live_of_pos[pos])] = true;
      }
    }
    for (int i = 0; i < static_cast<int>(regs.size()); ++i) {
      if (regs[i].consumed) {
        if (!owner_in(keep, regs[i].owner)) consumed_traced_pos.push_back(i);
      } else if (!live_is_kept[static_cast<size_t>(live_of_pos[i])]) {
        live_traced.push_back(live_of_pos[i]);
      }
    }
  }

  int lk() const { return static_cast<int>(live_kept.size()); }
  int lt() const { return static_cast<int>(live_traced.size()); }
};

/// One branch as a weighted low-rank factor of the kept-side reduction.
struct BranchFactor {
  Eigen::MatrixXcd m;              // (2^lk x 2^lt), scaled by sqrt(p/total)
  std::uint64_t kept_fixed = 0;    // consumed kept values at their kept bit slots
  std::uint64_t traced_key = 0;    // consumed traced values, packed
};

BranchFactor make_factor(const ReductionLayout& lay, const WeightedBranch& br, double total) {
  const PureState& st = *br.state;
  const auto& regs = st.registers();

  BranchFactor f;
  for (size_t i = 0; i < lay.consumed_kept_pos.size(); ++i) {
    if (regs[static_cast<size_t>(lay.consumed_kept_pos[i])].value) {
      f.kept_fixed |= std::uint64_t(1) << lay.kept_bit_of_consumed[i];
    }
  }
  for (size_t i = 0; i < lay.consumed_traced_pos.size(); ++i) {
    if (regs[static_cast<size_t>(lay.consumed_traced_pos[i])].value) {
      f.traced_key |= std::uint64_t(1) << i;
    }
  }

  const int L = st.live_count();
  const int lk = lay.lk();
  const int lt = lay.lt();
  f.m = Eigen::MatrixXcd::Zero(Eigen::Index(1) << lk, Eigen::Index(1) << lt);
  const auto& amps = st.live_amplitudes();
  const double w = std::sqrt(br.probability / total);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    Eigen::Index row = 0, col = 0;
    for (int a = 0; a < lk; ++a) {
      if (i & (Eigen::Index(1) << (L - 1 - lay.live_kept[a]))) row |= Eigen::Index(1) << (lk - 1 - a);
    }
    for (int a = 0; a < lt; ++a) {
      if (i & (Eigen::Index(1) << (L - 1 - lay.live_traced[a]))) col |= Eigen::Index(1) << (lt - 1 - a);
    }
    f.m(row, col) = amps(i) * w;
  }
  return f;
}

double total_probability(const BranchEnsemble& e) {
  double p = 0.0;
  for (const auto& b : e) p += b.probability;
  if (p <= 0.0) throw InvariantError("ensemble: total probability is zero");
  return p;
}

std::vector<BranchFactor> factorize(const ReductionLayout& lay, const BranchEnsemble& e) {
  const double total = total_probability(e);
  std::vector<BranchFactor> out;
  out.reserve(e.size());
  for (size_t i = 0; i < e.size(); ++i) {
    check_same_structure(*e[0].state, *e[i].state);
    out.push_back(make_factor(lay, e[i], total));
  }
  return out;
}

/// Column index space of the low-rank factor X = [blocks by traced key].
struct ColumnSpace {
  std::map<std::uint64_t, Eigen::Index> base;  // traced key -> column block base
  Eigen::Index width = 0;
};

ColumnSpace column_space(const std::vector<BranchFactor>& fs, int lt) {
  ColumnSpace cs;
  const Eigen::Index block = Eigen::Index(1) << lt;
  for (const auto& f : fs) {
    if (!cs.base.count(f.traced_key)) {
      cs.base[f.traced_key] = cs.width;
      cs.width += block;
    }
  }
  return cs;
}

/// Cross-Gram X_a† X_b over matching kept-side records.
Eigen::MatrixXcd cross_gram(const std::vector<BranchFactor>& fa, const ColumnSpace& ca,
                            const std::vector<BranchFactor>& fb, const ColumnSpace& cb,
                            Eigen::Index block) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(ca.width, cb.width);
  std::map<std::uint64_t, std::vector<const BranchFactor*>> by_kept;
  for (const auto& f : fb) by_kept[f.kept_fixed].push_back(&f);
  for (const auto& a : fa) {
    auto it = by_kept.find(a.kept_fixed);
    if (it == by_kept.end()) continue;
    for (const BranchFactor* b : it->second) {
      g.block(ca.base.at(a.traced_key), cb.base.at(b->traced_key), block, block) +=
          a.m.adjoint() * b->m;
    }
  }
  return g;
}

}  // namespace

PureState coherent_state(const BranchEnsemble& branches) {
  if (branches.empty()) throw InvariantError("coherent_state: empty ensemble");
  const double total = total_probability(branches);
  const PureState& first = *branches[0].state;
  const int n = static_cast<int>(first.registers().size());
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  for (const auto& br : branches) {
    check_same_structure(first, *br.state);
    acc += std::sqrt(br.probability / total) * br.state->materialized_amplitudes();
  }
  const double nrm = acc.norm();
  if (std::abs(nrm - 1.0) > 1e-6) {
    throw InvariantError("coherent_state: branches do not reassemble into a unit vector (norm " +
                         std::to_string(nrm) + ")");
  }
  acc /= nrm;
  std::vector<Register> regs = first.registers();
  for (auto& r : regs) {
    r.consumed = false;
    r.value = -1;
  }
  return state_from_amplitudes(std::move(acc), std::move(regs),
                               std::max(first.register_cap(), n));
}

DensityMatrix ensemble_reduced(const BranchEnsemble& branches, const std::vector<Owner>& keep) {
  if (branches.empty()) throw InvariantError("ensemble_reduced: empty ensemble");
  const ReductionLayout lay(*branches[0].state, keep);
  if (lay.kept_bits == 0) throw InvariantError("ensemble_reduced: keep set selects no registers");
  const auto fs = factorize(lay, branches);

  const Eigen::Index kdim = Eigen::Index(1) << lay.kept_bits;
  const Eigen::Index ldim = Eigen::Index(1) << lay.lk();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kdim, kdim);

  // embedding of live kept rows into the full kept index
  std::vector<Eigen::Index> spread(static_cast<size_t>(ldim));
  for (Eigen::Index r = 0; r < ldim; ++r) {
    Eigen::Index idx = 0;
    for (int a = 0; a < lay.lk(); ++a) {
      if (r & (Eigen::Index(1) << (lay.lk() - 1 - a))) idx |= Eigen::Index(1) << lay.kept_bit_of_live[a];
    }
    spread[static_cast<size_t>(r)] = idx;
  }

  std::map<std::uint64_t, std::vector<const BranchFactor*>> by_traced;
  for (const auto& f : fs) by_traced[f.traced_key].push_back(&f);
  for (const auto& [key, group] : by_traced) {
    (void)key;
    for (const BranchFactor* a : group) {
      for (const BranchFactor* b : group) {
        const Eigen::MatrixXcd blockm = a->m * b->m.adjoint();
        for (Eigen::Index r = 0; r < ldim; ++r) {
          for (Eigen::Index c = 0; c < ldim; ++c) {
            rho(static_cast<Eigen::Index>(a->kept_fixed) | spread[static_cast<size_t>(r)],
                static_cast<Eigen::Index>(b->kept_fixed) | spread[static_cast<size_t>(c)]) +=
                blockm(r, c);
          }
        }
      }
    }
  }

  std::vector<std::uint32_t> ids;
  for (int p : lay.kept_pos) ids.push_back(branches[0].state->registers()[static_cast<size_t>(p)].id);
  return DensityMatrix(std::move(rho), std::move(ids));
}

double ensemble_reduction_fidelity(const BranchEnsemble& e0, const BranchEnsemble& e1,
                                   const std::vector<Owner>& keep) {
  if (e0.empty() || e1.empty()) throw InvariantError("ensemble fidelity: empty ensemble");
  const ReductionLayout lay(*e0[0].state, keep);
  check_same_structure(*e0[0].state, *e1[0].state);
  const auto f0 = factorize(lay, e0);
  const auto f1 = factorize(lay, e1);
  const Eigen::Index block = Eigen::Index(1) << lay.lt();
  const ColumnSpace c0 = column_space(f0, lay.lt());
  const ColumnSpace c1 = column_space(f1, lay.lt());
  const Eigen::MatrixXcd g = cross_gram(f0, c0, f1, c1, block);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
  const double f = svd.singularValues().sum();
  return std::min(f, 1.0);
}

double ensemble_reduction_trace_distance(const BranchEnsemble& e0, const BranchEnsemble& e1,
                                         const std::vector<Owner>& keep) {
  if (e0.empty() || e1.empty()) throw InvariantError("ensemble trace distance: empty ensemble");
  const ReductionLayout lay(*e0[0].state, keep);
  check_same_structure(*e0[0].state, *e1[0].state);
  const auto f0 = factorize(lay, e0);
  const auto f1 = factorize(lay, e1);
  const Eigen::Index block = Eigen::Index(1) << lay.lt();
  const ColumnSpace c0 = column_space(f0, lay.lt());
  const ColumnSpace c1 = column_space(f1, lay.lt());

  // Gram matrix of the stacked factors [X_0 X_1]; the reductions are
  // X_b X_b†, so the nonzero eigenvalues of their difference match those of
  // sqrt(G) diag(I, -I) sqrt(G).
  const Eigen::Index w0 = c0.width, w1 = c1.width;
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(w0 + w1, w0 + w1);
  gram.topLeftCorner(w0, w0) = cross_gram(f0, c0, f0, c0, block);
  gram.bottomRightCorner(w1, w1) = cross_gram(f1, c1, f1, c1, block);
  gram.topRightCorner(w0, w1) = cross_gram(f0, c0, f1, c1, block);
  gram.bottomLeftCorner(w1, w0) = gram.topRightCorner(w0, w1).adjoint();

  const Eigen::MatrixXcd root = psd_sqrt(gram);
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(w0 + w1);
  sign.tail(w1).setConstant(-1.0);
  Eigen::MatrixXcd core = root * sign.asDiagonal() * root;
  core = (core + core.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(core, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qbclab
