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

#include "qbclab/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbclab {

namespace {

std::vector<int> live_positions(const std::vector<Register>& regs) {
  std::vector<int> pos;
  for (int i = 0; i < static_cast<int>(regs.size()); ++i) {
    if (!regs[i].consumed) pos.push_back(i);
  }
  return pos;
}

}  // namespace

PureState PureState::zero_state(const std::vector<Owner>& owners, int register_cap) {
  const int n = static_cast<int>(owners.size());
  if (n > register_cap) {
    throw ResourceError("zero_state: " + std::to_string(n) + " registers exceed the register cap of " +
                        std::to_string(register_cap));
  }
  PureState s;
  s.register_cap_ = register_cap;
  s.registers_.reserve(owners.size());
  for (int i = 0; i < n; ++i) {
    s.registers_.push_back(Register{static_cast<RegisterId>(i), owners[i], false, -1});
  }
  s.amplitudes_ = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  s.amplitudes_(0) = 1.0;
  return s;
}

PureState PureState::scalar(int register_cap) {
  PureState s;
  s.register_cap_ = register_cap;
  return s;
}

int PureState::live_count() const {
  int n = 0;
  for (const auto& r : registers_)
    if (!r.consumed) ++n;
  return n;
}

bool PureState::has_register(RegisterId id) const {
  return std::any_of(registers_.begin(), registers_.end(), [&](const Register& r) { return r.id == id; });
}

const Register& PureState::find(RegisterId id) const {
  for (const auto& r : registers_)
    if (r.id == id) return r;
  throw ProtocolViolation("unknown register " + std::to_string(id));
}

int PureState::live_index_of(RegisterId id) const {
  int live = 0;
  for (const auto& r : registers_) {
    if (r.id == id) return r.consumed ? -1 : live;
    if (!r.consumed) ++live;
  }
  return -1;
}

PureState PureState::allocated(RegisterId id, Owner owner) const {
  if (has_register(id)) {
    throw InvariantError("duplicate register id " + std::to_string(id));
  }
  if (live_count() + 1 > register_cap_) {
    throw ResourceError("allocation of register " + std::to_string(id) + " exceeds the register cap of " +
                        std::to_string(register_cap_) + " live registers");
  }
  PureState out = *this;
  out.registers_.push_back(Register{id, owner, false, -1});
  const Eigen::Index d = amplitudes_.size();
  Eigen::VectorXcd next = Eigen::VectorXcd::Zero(2 * d);
  for (Eigen::Index i = 0; i < d; ++i) next(i << 1) = amplitudes_(i);
  out.amplitudes_ = std::move(next);
  return out;
}

PureState PureState::reowned(RegisterId id, Owner new_owner) const {
  PureState out = *this;
  for (auto& r : out.registers_) {
    if (r.id == id) {
      r.owner = new_owner;
      return out;
    }
  }
  throw ProtocolViolation("unknown register " + std::to_string(id));
}

PureState PureState::applied(const Unitary& u) const {
  const int k = static_cast<int>(u.targets().size());
  const int L = live_count();
  std::vector<int> tpos(k);
  for (int t = 0; t < k; ++t) {
    const int lp = live_index_of(u.targets()[t]);
    if (lp < 0) {
      throw ProtocolViolation("unitary '" + u.name() + "' targets unknown or consumed register " +
                              std::to_string(u.targets()[t]));
    }
    tpos[t] = lp;
  }

  // Bit weight of live position p (first live register = most significant).
  const auto weight = [&](int p) { return Eigen::Index(1) << (L - 1 - p); };

  Eigen::Index target_mask = 0;
  std::vector<Eigen::Index> tw(k);
  for (int t = 0; t < k; ++t) {
    tw[t] = weight(tpos[t]);
    target_mask |= tw[t];
  }

  PureState out = *this;
  const Eigen::Index dim = amplitudes_.size();
  const Eigen::Index sub = Eigen::Index(1) << k;
  Eigen::VectorXcd x(sub), y(sub);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if ((base & target_mask) != 0) continue;
    for (Eigen::Index j = 0; j < sub; ++j) {
      Eigen::Index idx = base;
      for (int t = 0; t < k; ++t) {
        if (j & (Eigen::Index(1) << (k - 1 - t))) idx |= tw[t];
      }
      x(j) = amplitudes_(idx);
    }
    y.noalias() = u.matrix() * x;
    for (Eigen::Index j = 0; j < sub; ++j) {
      Eigen::Index idx = base;
      for (int t = 0; t < k; ++t) {
        if (j & (Eigen::Index(1) << (k - 1 - t))) idx |= tw[t];
      }
      out.amplitudes_(idx) = y(j);
    }
  }
  return out;
}

std::array<std::optional<MeasurementRecord>, 2> PureState::measurement_branches(RegisterId id,
                                                                                Basis basis) const {
  const Register& reg = find(id);
  if (reg.consumed) {
    throw ProtocolViolation("register " + std::to_string(id) + " was already measured");
  }

  const PureState* src = this;
  PureState rotated;
  if (basis == Basis::Times) {
    rotated = applied(Unitary(gates::hadamard(), {id}, "H"));
    src = &rotated;
  }

  const int L = src->live_count();
  const int pos = src->live_index_of(id);
  const Eigen::Index w = Eigen::Index(1) << (L - 1 - pos);
  const Eigen::Index dim = src->amplitudes_.size();

  double p[2] = {0.0, 0.0};
  for (Eigen::Index i = 0; i < dim; ++i) {
    p[(i & w) ? 1 : 0] += std::norm(src->amplitudes_(i));
  }
  const double total = p[0] + p[1];
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvariantError("state norm drifted to " + std::to_string(std::sqrt(total)) + " before measurement");
  }

  std::array<std::optional<MeasurementRecord>, 2> out;
  for (int b = 0; b < 2; ++b) {
    if (p[b] < tol::kBranchPrune) continue;
    PureState post = *src;
    // compress the measured register out of the live part
    Eigen::VectorXcd amps(dim / 2);
    const double inv = 1.0 / std::sqrt(p[b]);
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (((i & w) ? 1 : 0) != b) continue;
      const Eigen::Index low = i & (w - 1);
      const Eigen::Index high = (i >> 1) & ~(w - 1);
      amps(high | low) = src->amplitudes_(i) * inv;
    }
    post.amplitudes_ = std::move(amps);
    for (auto& r : post.registers_) {
      if (r.id == id) {
        r.consumed = true;
        r.value = b;
        r.owner = r.owner == Owner::A ? Owner::EA : (r.owner == Owner::B ? Owner::EB : r.owner);
      }
    }
    MeasurementRecord rec;
    rec.outcome = b;
    rec.probability = p[b];
    rec.post_state = std::make_shared<const PureState>(std::move(post));
    out[b] = std::move(rec);
  }
  return out;
}

MeasurementRecord PureState::measured(RegisterId id, double draw, Basis basis) const {
  auto branches = measurement_branches(id, basis);
  const double p0 = branches[0] ? branches[0]->probability : 0.0;
  const int outcome = draw < p0 ? 0 : 1;
  if (!branches[outcome]) {
    // draw landed in a zero-probability branch through rounding; take the other
    return *branches[1 - outcome];
  }
  return *branches[outcome];
}

Eigen::VectorXcd PureState::materialized_amplitudes() const {
  const int n = static_cast<int>(registers_.size());
  const Eigen::Index full = Eigen::Index(1) << n;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(full);

  Eigen::Index fixed = 0;
  std::vector<Eigen::Index> live_weights;
  for (int i = 0; i < n; ++i) {
    const Eigen::Index w = Eigen::Index(1) << (n - 1 - i);
    if (registers_[i].consumed) {
      if (registers_[i].value) fixed |= w;
    } else {
      live_weights.push_back(w);
    }
  }
  const Eigen::Index dim = amplitudes_.size();
  const int L = static_cast<int>(live_weights.size());
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index idx = fixed;
    for (int p = 0; p < L; ++p) {
      if (i & (Eigen::Index(1) << (L - 1 - p))) idx |= live_weights[p];
    }
    out(idx) = amplitudes_(i);
  }
  return out;
}

PureState PureState::materialized() const {
  PureState out;
  out.register_cap_ = std::max(register_cap_, static_cast<int>(registers_.size()));
  out.registers_ = registers_;
  for (auto& r : out.registers_) {
    r.consumed = false;
    r.value = -1;
  }
  out.amplitudes_ = materialized_amplitudes();
  return out;
}

cxd PureState::overlap(const PureState& other) const {
  if (registers_.size() != other.registers_.size()) {
    throw InvariantError("overlap: register lists differ in size");
  }
  for (size_t i = 0; i < registers_.size(); ++i) {
    if (registers_[i].id != other.registers_[i].id) {
      throw InvariantError("overlap: register lists differ");
    }
    if (registers_[i].consumed != other.registers_[i].consumed) {
      throw InvariantError("overlap: consumed flags differ; materialize first");
    }
    if (registers_[i].consumed && registers_[i].value != other.registers_[i].value) {
      return 0.0;  // orthogonal classical records
    }
  }
  return amplitudes_.dot(other.amplitudes_);  // Eigen: conjugates the left side
}

std::vector<Register> PureState::registers_with_owner(const std::vector<Owner>& owners) const {
  std::vector<Register> out;
  for (const auto& r : registers_) {
    if (std::find(owners.begin(), owners.end(), r.owner) != owners.end()) out.push_back(r);
  }
  return out;
}

DensityMatrix PureState::reduced(const std::vector<Owner>& keep) const {
  if (keep.empty()) throw InvariantError("partial_trace: keep set is empty");
  std::vector<RegisterId> ids;
  for (const auto& r : registers_with_owner(keep)) ids.push_back(r.id);
  return reduced_registers(ids);
}

DensityMatrix PureState::reduced_registers(const std::vector<RegisterId>& keep) const {
  if (keep.empty()) throw InvariantError("partial_trace: keep set is empty");
  for (RegisterId id : keep) find(id);  // throws on unknown ids

  // kept registers in state order
  std::vector<int> kept_pos;
  for (int i = 0; i < static_cast<int>(registers_.size()); ++i) {
    if (std::find(keep.begin(), keep.end(), registers_[i].id) != keep.end()) kept_pos.push_back(i);
  }

  const auto live = live_positions(registers_);
  const int L = static_cast<int>(live.size());

  // split live registers into kept/traced, remembering kept bit offsets
  std::vector<int> live_kept, live_traced;      // indices into the live order
  std::vector<int> kept_bit_of_live;            // per live_kept entry: bit slot in the kept index
  Eigen::Index fixed_bits = 0;                  // consumed kept registers
  const int K = static_cast<int>(kept_pos.size());
  for (int kslot = 0; kslot < K; ++kslot) {
    const Register& r = registers_[kept_pos[kslot]];
    if (r.consumed) {
      if (r.value) fixed_bits |= Eigen::Index(1) << (K - 1 - kslot);
    } else {
      for (int lp = 0; lp < L; ++lp) {
        if (registers_[live[lp]].id == r.id) {
          live_kept.push_back(lp);
          kept_bit_of_live.push_back(K - 1 - kslot);
          break;
        }
      }
    }
  }
  for (int lp = 0; lp < L; ++lp) {
    bool kept = false;
    for (int x : live_kept) kept |= (x == lp);
    if (!kept) live_traced.push_back(lp);
  }

  const int nk = static_cast<int>(live_kept.size());
  const int nt = static_cast<int>(live_traced.size());
  Eigen::MatrixXcd m(Eigen::Index(1) << nk, Eigen::Index(1) << nt);
  const Eigen::Index dim = amplitudes_.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index row = 0, col = 0;
    for (int a = 0; a < nk; ++a) {
      if (i & (Eigen::Index(1) << (L - 1 - live_kept[a]))) row |= Eigen::Index(1) << (nk - 1 - a);
    }
    for (int a = 0; a < nt; ++a) {
      if (i & (Eigen::Index(1) << (L - 1 - live_traced[a]))) col |= Eigen::Index(1) << (nt - 1 - a);
    }
    m(row, col) = amplitudes_(i);
  }
  Eigen::MatrixXcd rho_live = m * m.adjoint();

  // embed the live block at the consumed registers' fixed bits
  const Eigen::Index kdim = Eigen::Index(1) << K;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kdim, kdim);
  const Eigen::Index ldim = Eigen::Index(1) << nk;
  std::vector<Eigen::Index> embed(ldim);
  for (Eigen::Index r = 0; r < ldim; ++r) {
    Eigen::Index idx = fixed_bits;
    for (int a = 0; a < nk; ++a) {
      if (r & (Eigen::Index(1) << (nk - 1 - a))) idx |= Eigen::Index(1) << kept_bit_of_live[a];
    }
    embed[r] = idx;
  }
  for (Eigen::Index r = 0; r < ldim; ++r)
    for (Eigen::Index c = 0; c < ldim; ++c) rho(embed[r], embed[c]) = rho_live(r, c);

  std::vector<std::uint32_t> ids;
  for (int p : kept_pos) ids.push_back(registers_[p].id);
  return DensityMatrix(std::move(rho), std::move(ids));
}

bool PureState::same_layout(const PureState& other) const {
  if (registers_.size() != other.registers_.size()) return false;
  for (size_t i = 0; i < registers_.size(); ++i) {
    const Register& a = registers_[i];
    const Register& b = other.registers_[i];
    if (a.id != b.id || a.owner != b.owner || a.consumed != b.consumed) return false;
    if (a.consumed && a.value != b.value) return false;
  }
  return true;
}

void PureState::assert_normalized(double tolerance) const {
  const double defect = std::abs(norm() - 1.0);
  if (defect > tolerance) {
    throw InvariantError("state norm deviates from 1 by " + std::to_string(defect));
  }
}

std::string PureState::pretty(double amplitude_floor) const {
  std::ostringstream os;
  os << "registers:";
  for (const auto& r : registers_) {
    os << " " << r.id << ":" << to_string(r.owner);
    if (r.consumed) os << "=" << r.value;
  }
  os << "\n";
  const Eigen::VectorXcd full = materialized_amplitudes();
  const int n = static_cast<int>(registers_.size());
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    if (std::abs(full(i)) < amplitude_floor) continue;
    os << "  |";
    for (int b = 0; b < n; ++b) os << ((i >> (n - 1 - b)) & 1);
    os << ">  ";
    const cxd a = full(i);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%+.6f%+.6fi", a.real(), a.imag());
    os << buf << "\n";
  }
  return os.str();
}

PureState state_from_amplitudes(Eigen::VectorXcd amplitudes, std::vector<Register> registers,
                                int register_cap) {
  if (amplitudes.size() != Eigen::Index(1) << registers.size()) {
    throw InvariantError("amplitude vector length does not match register count");
  }
  for (auto& r : registers) {
    if (r.consumed) throw InvariantError("state_from_amplitudes expects live registers");
  }
  PureState s;
  s.register_cap_ = std::max<int>(register_cap, static_cast<int>(registers.size()));
  s.registers_ = std::move(registers);
  s.amplitudes_ = std::move(amplitudes);
  s.assert_normalized();
  return s;
}

PureState zero_state(int num_registers, const std::vector<Owner>& owners, int register_cap) {
  std::vector<Owner> who = owners;
  if (who.empty()) who.assign(static_cast<size_t>(num_registers), Owner::A);
  if (static_cast<int>(who.size()) != num_registers) {
    throw InvariantError("zero_state: owner list size does not match register count");
  }
  return PureState::zero_state(who, register_cap);
}

PureState apply_unitary(const PureState& state, const Unitary& u) { return state.applied(u); }

MeasurementRecord measure(const PureState& state, RegisterId id, double draw, Basis basis) {
  return state.measured(id, draw, basis);
}

DensityMatrix partial_trace(const PureState& state, const std::vector<Owner>& keep) {
  return state.reduced(keep);
}

}  // namespace qbclab
