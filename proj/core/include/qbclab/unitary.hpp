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
#include <string>
#include <vector>

#include "qbclab/common.hpp"

namespace qbclab {

/// Unitary acting on an ordered list of target registers. The first target
/// carries the most significant bit of the matrix index, matching the
/// amplitude storage convention of PureState.
class Unitary {
 public:
  Unitary(Eigen::MatrixXcd matrix, std::vector<RegisterId> targets, std::string name = "U");

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::vector<RegisterId>& targets() const { return targets_; }
  const std::string& name() const { return name_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  Eigen::MatrixXcd matrix_;
  std::vector<RegisterId> targets_;
  std::string name_;
};

/// Largest |eigenvalue| of U†U - I; must stay below tol::kUnitary.
double unitarity_defect(const Eigen::MatrixXcd& m);

namespace gates {

Eigen::MatrixXcd identity(int qubits);
Eigen::MatrixXcd hadamard();
Eigen::MatrixXcd pauli_x();
Eigen::MatrixXcd pauli_z();

/// |0> -> cos(a)|0> + sin(a)|1>, real rotation in the X-Z plane.
Eigen::MatrixXcd plane_rotation(double angle);

/// Control on the first (most significant) qubit.
Eigen::MatrixXcd cnot();

/// Controlled-u with the control qubit prepended as the most significant one.
Eigen::MatrixXcd controlled(const Eigen::MatrixXcd& u);

/// Controlled-u where the control qubit is read in the given basis: the
/// control is conjugated into that basis before and after the plain control.
Eigen::MatrixXcd controlled_in_basis(const Eigen::MatrixXcd& u, Basis basis);

}  // namespace gates

}  // namespace qbclab
