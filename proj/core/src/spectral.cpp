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

#include "qbclab/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace qbclab {

namespace {

constexpr double kRankTol = 1e-12;

bool owner_in(const std::vector<Owner>& set, Owner o) {
  return std::find(set.begin(), set.end(), o) != set.end();
}

struct Split {
  std::vector<int> left_pos;   // positions (register list order) on the left side
  std::vector<int> right_pos;  // remaining positions
};

Split split_positions(const PureState& state, const std::vector<Owner>& left_side) {
  Split s;
  const auto& regs = state.registers();
  for (int i = 0; i < static_cast<int>(regs.size()); ++i) {
    (owner_in(left_side, regs[i].owner) ? s.left_pos : s.right_pos).push_back(i);
  }
  return s;
}

Eigen::MatrixXcd reshape(const Eigen::VectorXcd& full, int n, const Split& s) {
  const int na = static_cast<int>(s.left_pos.size());
  const int nb = static_cast<int>(s.right_pos.size());
  Eigen::MatrixXcd m(Eigen::Index(1) << na, Eigen::Index(1) << nb);
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    Eigen::Index row = 0, col = 0;
    for (int a = 0; a < na; ++a) {
      if (i & (Eigen::Index(1) << (n - 1 - s.left_pos[a]))) row |= Eigen::Index(1) << (na - 1 - a);
    }
    for (int b = 0; b < nb; ++b) {
      if (i & (Eigen::Index(1) << (n - 1 - s.right_pos[b]))) col |= Eigen::Index(1) << (nb - 1 - b);
    }
    m(row, col) = full(i);
  }
  return m;
}

Eigen::VectorXcd unshape(const Eigen::MatrixXcd& m, int n, const Split& s) {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  const int na = static_cast<int>(s.left_pos.size());
  const int nb = static_cast<int>(s.right_pos.size());
  for (Eigen::Index row = 0; row < m.rows(); ++row) {
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      Eigen::Index i = 0;
      for (int a = 0; a < na; ++a) {
        if (row & (Eigen::Index(1) << (na - 1 - a))) i |= Eigen::Index(1) << (n - 1 - s.left_pos[a]);
      }
      for (int b = 0; b < nb; ++b) {
        if (col & (Eigen::Index(1) << (nb - 1 - b))) i |= Eigen::Index(1) << (n - 1 - s.right_pos[b]);
      }
      full(i) = m(row, col);
    }
  }
  return full;
}

}  // namespace

Eigen::MatrixXcd state_matrix(const PureState& state, const std::vector<Owner>& left_side) {
  const Split s = split_positions(state, left_side);
  return reshape(state.materialized_amplitudes(), static_cast<int>(state.registers().size()), s);
}

SchmidtDecomposition schmidt(const PureState& state, const std::vector<Owner>& left_side,
                             const std::vector<Owner>& right_side) {
  for (const auto& r : state.registers()) {
    const bool in_left = owner_in(left_side, r.owner);
    const bool in_right = owner_in(right_side, r.owner);
    if (in_left == in_right) {
      throw InvariantError("schmidt: register " + std::to_string(r.id) +
                           " is not covered exactly once by the bipartition");
    }
  }
  const Split s = split_positions(state, left_side);
  const Eigen::MatrixXcd m =
      reshape(state.materialized_amplitudes(), static_cast<int>(state.registers().size()), s);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SchmidtDecomposition out;
  out.coefficients = svd.singularValues();
  out.left_basis = svd.matrixU();
  out.right_basis = svd.matrixV().conjugate();  // m = U S V†  =>  psi = sum s_i u_i ⊗ conj(v_i)

  // fixed phase choice: first nonzero component of each e_i real positive
  for (Eigen::Index i = 0; i < out.left_basis.cols(); ++i) {
    for (Eigen::Index r = 0; r < out.left_basis.rows(); ++r) {
      const cxd x = out.left_basis(r, i);
      if (std::abs(x) > kRankTol) {
        const cxd phase = x / std::abs(x);
        out.left_basis.col(i) *= std::conj(phase);
        out.right_basis.col(i) *= phase;
        break;
      }
    }
  }

  const double total = out.coefficients.squaredNorm();
  if (std::abs(total - 1.0) > tol::kHermitian) {
    throw InvariantError("schmidt coefficients do not sum to 1 in square");
  }

  const auto& regs = state.registers();
  for (int p : s.left_pos) out.left_registers.push_back(regs[p]);
  for (int p : s.right_pos) out.right_registers.push_back(regs[p]);
  return out;
}

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  // eigenvalues at rounding-noise scale would blow up under the square
  // root; zero them relative to the leading one
  const double cutoff = std::max(ev.size() > 0 ? ev.maxCoeff() : 0.0, 0.0) * 1e-13;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < tol::kEigenvalueFloor) {
      throw InvariantError("matrix is not PSD: eigenvalue " + std::to_string(ev(i)));
    }
    ev(i) = ev(i) <= cutoff ? 0.0 : std::sqrt(ev(i));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

FidelityValue fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw InvariantError("fidelity: dimension mismatch");
  }
  // trace norm of sqrt(rho) sqrt(sigma); singular values do not amplify
  // round-off the way eigenvalues of the triple product would
  const Eigen::MatrixXcd prod = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(prod);
  const double f = svd.singularValues().sum();
  if (f > 1.0 + tol::kProbability) {
    throw InvariantError("fidelity exceeds 1: " + std::to_string(f));
  }
  return FidelityValue{std::min(f, 1.0)};
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw InvariantError("trace_distance: dimension mismatch");
  }
  Eigen::MatrixXcd diff = rho.matrix() - sigma.matrix();
  diff = (diff + diff.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

PureState uhlmann_partner(const DensityMatrix& rho0, const PureState& psi1,
                          const std::vector<Owner>& a_side) {
  const PureState full = psi1.materialized();
  const Split s = split_positions(full, a_side);
  const int n = static_cast<int>(full.registers().size());
  const Eigen::MatrixXcd m1 = reshape(full.materialized_amplitudes(), n, s);
  const Eigen::Index da = m1.rows();
  const Eigen::Index db = m1.cols();
  if (rho0.dim() != db) {
    throw InvariantError("uhlmann_partner: rho0 dimension does not match the kept side");
  }

  const Eigen::MatrixXcd rho0_t = rho0.matrix().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0_t);
  Eigen::Index rank0 = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) < tol::kEigenvalueFloor) {
      throw InvariantError("uhlmann_partner: rho0 is not PSD");
    }
    if (es.eigenvalues()(i) > kRankTol) ++rank0;
  }
  if (da < rank0) {
    throw InvariantError("uhlmann_partner: purifying side of dimension " + std::to_string(da) +
                         " is too small for a rank-" + std::to_string(rank0) + " state");
  }
  const Eigen::MatrixXcd s0 = psd_sqrt(rho0_t);

  // polar alignment of the cross operator, isometric on the support of rho0;
  // thin factors are enough: at most rank(rho0) <= min(da, db) pairs arise
  const Eigen::MatrixXcd k = m1 * s0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);

  std::vector<Eigen::VectorXcd> us, vs;
  const Eigen::Index nsv = svd.singularValues().size();
  for (Eigen::Index i = 0; i < nsv; ++i) {
    if (svd.singularValues()(i) > kRankTol) {
      us.push_back(svd.matrixU().col(i));
      vs.push_back(svd.matrixV().col(i));
    }
  }
  // extend the pairing so that the whole support of rho0 is covered; a
  // direction counts as new only when it is far outside the current span
  // (near-span residuals are basis round-off and carry negligible weight)
  Eigen::Index next_u = static_cast<Eigen::Index>(us.size());
  for (Eigen::Index j = es.eigenvalues().size() - 1; j >= 0; --j) {
    if (es.eigenvalues()(j) <= kRankTol) continue;
    Eigen::VectorXcd g = es.eigenvectors().col(j);
    for (const auto& v : vs) g -= v * v.dot(g);
    if (g.norm() > 1e-6) {
      if (next_u >= da) {
        throw InvariantError("uhlmann_partner: ran out of purifying directions");
      }
      vs.push_back(g.normalized());
      us.push_back(svd.matrixU().col(next_u++));
    }
  }

  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(da, db);
  for (size_t i = 0; i < us.size(); ++i) p += us[i] * vs[i].adjoint();
  Eigen::MatrixXcd m01 = p * s0;

  const double nrm = m01.norm();
  if (std::abs(nrm - 1.0) > 1e-9) {
    throw InvariantError("uhlmann_partner: purification norm drifted to " + std::to_string(nrm));
  }
  m01 /= nrm;

  return state_from_amplitudes(unshape(m01, n, s), full.registers(), full.register_cap());
}

Unitary steering_unitary(const PureState& psi_from, const PureState& psi_to,
                         const std::vector<Owner>& side) {
  const PureState from = psi_from.materialized();
  const PureState to = psi_to.materialized();
  if (!from.same_layout(to)) {
    throw InvariantError("steering_unitary: register layouts differ");
  }
  const Split s = split_positions(from, side);
  const int n = static_cast<int>(from.registers().size());
  const Eigen::MatrixXcd mf = reshape(from.materialized_amplitudes(), n, s);
  const Eigen::MatrixXcd mt = reshape(to.materialized_amplitudes(), n, s);

  const double mismatch = (mf.adjoint() * mf - mt.adjoint() * mt).cwiseAbs().maxCoeff();
  if (mismatch > tol::kReductionMatch) {
    throw ProtocolViolation(
        "steering_unitary: reductions on the kept side differ by " + std::to_string(mismatch) +
        "; compute a compatible purification with uhlmann_partner first");
  }

  const Eigen::MatrixXcd k = mt * mf.adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXcd w = svd.matrixU() * svd.matrixV().adjoint();

  const double err = (w * mf - mt).norm();
  if (err > tol::kSteering) {
    throw InvariantError("steering_unitary: synthesized map misses the target by " + std::to_string(err));
  }

  std::vector<RegisterId> targets;
  for (int pos : s.left_pos) targets.push_back(from.registers()[pos].id);
  return Unitary(w, std::move(targets), "steer");
}

}  // namespace qbclab
