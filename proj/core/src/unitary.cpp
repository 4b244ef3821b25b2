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

#include "qbclab/unitary.hpp"

#include <cmath>
#include <unordered_set>

namespace qbclab {

double unitarity_defect(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) return 1.0;
  Eigen::MatrixXcd g = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Unitary::Unitary(Eigen::MatrixXcd matrix, std::vector<RegisterId> targets, std::string name)
    : matrix_(std::move(matrix)), targets_(std::move(targets)), name_(std::move(name)) {
  const Eigen::Index want = Eigen::Index(1) << targets_.size();
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != want) {
    throw InvariantError("unitary '" + name_ + "': matrix dimension does not match target count");
  }
  std::unordered_set<RegisterId> seen(targets_.begin(), targets_.end());
  if (seen.size() != targets_.size()) {
    throw InvariantError("unitary '" + name_ + "': duplicate target register");
  }
  const double defect = unitarity_defect(matrix_);
  if (defect > tol::kUnitary) {
    throw InvariantError("unitary '" + name_ + "': U†U deviates from I by " + std::to_string(defect));
  }
}

namespace gates {

Eigen::MatrixXcd identity(int qubits) {
  const Eigen::Index d = Eigen::Index(1) << qubits;
  return Eigen::MatrixXcd::Identity(d, d);
}

Eigen::MatrixXcd hadamard() {
  Eigen::MatrixXcd h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

Eigen::MatrixXcd pauli_x() {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

Eigen::MatrixXcd pauli_z() {
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

Eigen::MatrixXcd plane_rotation(double angle) {
  Eigen::MatrixXcd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

Eigen::MatrixXcd cnot() { return controlled(pauli_x()); }

Eigen::MatrixXcd controlled(const Eigen::MatrixXcd& u) {
  const Eigen::Index d = u.rows();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
  c.block(d, d, d, d) = u;
  return c;
}

Eigen::MatrixXcd controlled_in_basis(const Eigen::MatrixXcd& u, Basis basis) {
  Eigen::MatrixXcd c = controlled(u);
  if (basis == Basis::Plus) return c;
  const Eigen::Index d = u.rows();
  Eigen::MatrixXcd rot = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
  Eigen::MatrixXcd h = hadamard();
  // H on the control qubit (most significant): block structure over {0,1}
  rot.setZero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) rot.block(a * d, b * d, d, d) = h(a, b) * Eigen::MatrixXcd::Identity(d, d);
  return rot * c * rot;
}

}  // namespace gates

}  // namespace qbclab
