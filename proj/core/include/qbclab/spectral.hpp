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
#include <vector>

#include "qbclab/density.hpp"
#include "qbclab/state.hpp"
#include "qbclab/unitary.hpp"

namespace qbclab {

/// Fidelity in [0, 1], square-root convention.
struct FidelityValue {
  double value = 0.0;
};

/// Canonical bipartite form sum_i c_i |e_i> ⊗ |f_i| of a pure state, with
/// c_i = sqrt(lambda_i) nonincreasing and both bases orthonormal. Columns of
/// left_basis/right_basis are the e_i/f_i; left/right registers follow the
/// state's register order restricted to each side.
struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXcd left_basis;
  Eigen::MatrixXcd right_basis;
  std::vector<Register> left_registers;
  std::vector<Register> right_registers;
};

/// Reshapes a state into its coefficient matrix for the (left | rest)
/// bipartition: rows indexed by the left-side registers, columns by the
/// remaining ones, both in state order, first register = most significant
/// bit. Consumed registers are re-expanded at their recorded values.
Eigen::MatrixXcd state_matrix(const PureState& state, const std::vector<Owner>& left_side);

/// Schmidt decomposition across (left owners | right owners). The two owner
/// sets must cover every register exactly once. Ties in the coefficients are
/// resolved deterministically and the phase of each e_i is fixed so that its
/// first nonzero component is real positive.
SchmidtDecomposition schmidt(const PureState& state, const std::vector<Owner>& left_side,
                             const std::vector<Owner>& right_side);

/// Hermitian PSD square root by eigendecomposition. Eigenvalues in
/// [tol::kEigenvalueFloor, 0) are clamped to 0; anything lower throws.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m);

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)); 1 iff the matrices coincide.
FidelityValue fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// (1/2) sum |eigenvalues(rho - sigma)|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Purification of rho0 on psi1's register layout that maximizes the (real)
/// overlap with psi1; the overlap equals the fidelity between rho0 and
/// psi1's reduction on the complement of `a_side`. rho0 must live on the
/// registers outside a_side, in state order.
PureState uhlmann_partner(const DensityMatrix& rho0, const PureState& psi1,
                          const std::vector<Owner>& a_side);

/// Unitary supported on `side` mapping psi_from to psi_to. Requires the
/// reductions on the complement to agree within tol::kReductionMatch;
/// otherwise throws ProtocolViolation (obtain a compatible target via
/// uhlmann_partner first). The matrix acts on the side's registers in state
/// order and is completed arbitrarily outside the support of psi_from.
Unitary steering_unitary(const PureState& psi_from, const PureState& psi_to,
                         const std::vector<Owner>& side);

}  // namespace qbclab
