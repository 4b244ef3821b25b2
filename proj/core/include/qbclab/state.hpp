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
#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbclab/common.hpp"
#include "qbclab/density.hpp"
#include "qbclab/unitary.hpp"

namespace qbclab {

/// One labeled qubit register. Once measured it is `consumed`: its content
/// is the classical `value` and it belongs to the owner's environment.
struct Register {
  RegisterId id = 0;
  Owner owner = Owner::A;
  bool consumed = false;
  int value = -1;  // classical content, only meaningful when consumed
};

inline constexpr int kDefaultRegisterCap = 16;

class PureState;

/// Outcome of one binary measurement: the branch taken, its probability and
/// the renormalized post-measurement state.
struct MeasurementRecord {
  int outcome = 0;
  double probability = 0.0;
  std::shared_ptr<const PureState> post_state;
};

/// Pure state of an ordered list of labeled qubit registers.
///
/// Amplitudes are stored over the *live* (unconsumed) registers only; a
/// consumed register contributes a fixed computational basis factor that is
/// re-expanded on demand (see materialized()). Within the live part, the
/// first live register in list order carries the most significant bit of the
/// amplitude index. All operations return new values; a PureState is never
/// mutated after construction.
class PureState {
 public:
  /// All-|0> product state with the given owners. Register ids are 0..n-1.
  static PureState zero_state(const std::vector<Owner>& owners, int register_cap = kDefaultRegisterCap);

  /// Scalar state (no registers, amplitude [1]).
  static PureState scalar(int register_cap = kDefaultRegisterCap);

  const std::vector<Register>& registers() const { return registers_; }
  const Eigen::VectorXcd& live_amplitudes() const { return amplitudes_; }
  int register_cap() const { return register_cap_; }

  int live_count() const;
  Eigen::Index live_dim() const { return amplitudes_.size(); }
  double norm() const { return amplitudes_.norm(); }
  bool has_register(RegisterId id) const;
  const Register& find(RegisterId id) const;

  /// Appends a fresh |0> register (least significant bit position).
  PureState allocated(RegisterId id, Owner owner) const;

  /// Reassigns the owner tag of a live register.
  PureState reowned(RegisterId id, Owner new_owner) const;

  PureState applied(const Unitary& u) const;

  /// Both measurement branches of a register read in `basis`; entries whose
  /// probability is below tol::kBranchPrune are absent. If the basis is
  /// Times the register is rotated into the computational basis first, so
  /// the recorded outcome is the diagonal-basis content.
  std::array<std::optional<MeasurementRecord>, 2> measurement_branches(RegisterId id,
                                                                       Basis basis = Basis::Plus) const;

  /// Single measurement: outcome 0 iff draw < Pr[0].
  MeasurementRecord measured(RegisterId id, double draw, Basis basis = Basis::Plus) const;

  /// Amplitudes over all registers (consumed ones re-expanded as their
  /// recorded basis state), in register list order.
  Eigen::VectorXcd materialized_amplitudes() const;

  /// Same state with every consumed register re-inflated into the live part.
  /// Owner tags are preserved; the result has no consumed registers.
  PureState materialized() const;

  /// Inner product <this|other>; layouts must match register-for-register.
  cxd overlap(const PureState& other) const;

  /// Reduced density matrix over the registers whose owner is in `keep`.
  DensityMatrix reduced(const std::vector<Owner>& keep) const;

  /// Reduced density matrix over an explicit register id list (state order).
  DensityMatrix reduced_registers(const std::vector<RegisterId>& keep) const;

  /// Registers (state order) whose owner is in the given set.
  std::vector<Register> registers_with_owner(const std::vector<Owner>& owners) const;

  /// True when the two states have identical register lists (ids, owners,
  /// consumed flags and values).
  bool same_layout(const PureState& other) const;

  void assert_normalized(double tolerance = tol::kStateNorm) const;

  std::string pretty(double amplitude_floor = 1e-9) const;

 private:
  PureState() = default;

  int live_index_of(RegisterId id) const;  // -1 when consumed or absent

  Eigen::VectorXcd amplitudes_ = Eigen::VectorXcd::Ones(1);
  std::vector<Register> registers_;
  int register_cap_ = kDefaultRegisterCap;

  friend PureState state_from_amplitudes(Eigen::VectorXcd, std::vector<Register>, int);
};

/// Builds a fully live state from explicit amplitudes; the vector length
/// must be 2^(register count) and the norm 1 within tol::kStateNorm.
PureState state_from_amplitudes(Eigen::VectorXcd amplitudes, std::vector<Register> registers,
                                int register_cap = kDefaultRegisterCap);

// Free-function spellings of the core operations.
PureState zero_state(int num_registers, const std::vector<Owner>& owners = {},
                     int register_cap = kDefaultRegisterCap);
PureState apply_unitary(const PureState& state, const Unitary& u);
MeasurementRecord measure(const PureState& state, RegisterId id, double draw,
                          Basis basis = Basis::Plus);
DensityMatrix partial_trace(const PureState& state, const std::vector<Owner>& keep);

}  // namespace qbclab
