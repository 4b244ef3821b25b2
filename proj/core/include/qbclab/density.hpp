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
#include <cstdint>
#include <vector>

#include "qbclab/common.hpp"

namespace qbclab {

struct Register;

/// Hermitian, positive semidefinite, unit-trace matrix over an ordered list
/// of kept registers (first register = most significant index bit).
class DensityMatrix {
 public:
  DensityMatrix(Eigen::MatrixXcd matrix, std::vector<std::uint32_t> subsystem_ids);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::vector<std::uint32_t>& subsystem() const { return subsystem_ids_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// Checks hermiticity, trace and eigenvalue floor; throws InvariantError.
  void validate() const;

 private:
  Eigen::MatrixXcd matrix_;
  std::vector<std::uint32_t> subsystem_ids_;
};

}  // namespace qbclab
