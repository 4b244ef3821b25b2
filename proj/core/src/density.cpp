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

#include "qbclab/density.hpp"

#include <cmath>

namespace qbclab {

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix, std::vector<std::uint32_t> subsystem_ids)
    : matrix_(std::move(matrix)), subsystem_ids_(std::move(subsystem_ids)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw InvariantError("density matrix must be square");
  }
  const Eigen::Index want = Eigen::Index(1) << subsystem_ids_.size();
  if (matrix_.rows() != want) {
    throw InvariantError("density matrix dimension does not match subsystem register count");
  }
}

void DensityMatrix::validate() const {
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::kHermitian) {
    throw InvariantError("density matrix not Hermitian (defect " + std::to_string(herm) + ")");
  }
  const double tr = std::abs(matrix_.trace().real() - 1.0) + std::abs(matrix_.trace().imag());
  if (tr > tol::kTrace) {
    throw InvariantError("density matrix trace differs from 1 by " + std::to_string(tr));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < tol::kEigenvalueFloor) {
    throw InvariantError("density matrix has eigenvalue " + std::to_string(lo));
  }
}

}  // namespace qbclab
