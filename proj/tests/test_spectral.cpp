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

#include <doctest.h>

#include <cmath>

#include "qbclab/spectral.hpp"
#include "support/oracles.hpp"

using namespace qbclab;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const std::vector<Owner> kA{Owner::A};
const std::vector<Owner> kB{Owner::B};

PureState bell_pair() {
  PureState s = zero_state(2, {Owner::A, Owner::B});
  s = s.applied(Unitary(gates::hadamard(), {0}, "H"));
  return s.applied(Unitary(gates::cnot(), {0, 1}, "CX"));
}

DensityMatrix pure_density(const Eigen::VectorXcd& v, int qubits) {
  std::vector<std::uint32_t> ids;
  for (int i = 0; i < qubits; ++i) ids.push_back(static_cast<std::uint32_t>(i));
  return DensityMatrix(v * v.adjoint(), ids);
}

PureState product_state(const Eigen::VectorXcd& a, Owner oa, const Eigen::VectorXcd& b, Owner ob) {
  Eigen::VectorXcd amps(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) amps(i * b.size() + j) = a(i) * b(j);
  std::vector<Register> regs;
  int bits_a = 0, bits_b = 0;
  while ((Eigen::Index(1) << bits_a) < a.size()) ++bits_a;
  while ((Eigen::Index(1) << bits_b) < b.size()) ++bits_b;
  for (int i = 0; i < bits_a; ++i) regs.push_back(Register{static_cast<RegisterId>(i), oa, false, -1});
  for (int i = 0; i < bits_b; ++i) {
    regs.push_back(Register{static_cast<RegisterId>(bits_a + i), ob, false, -1});
  }
  return state_from_amplitudes(std::move(amps), std::move(regs));
}

}  // namespace

TEST_CASE("schmidt: coded pair, product state, reconstruction") {
  const SchmidtDecomposition bell = schmidt(bell_pair(), kA, kB);
  REQUIRE(bell.coefficients.size() == 2);
  CHECK(bell.coefficients(0) == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK(bell.coefficients(1) == doctest::Approx(kInvSqrt2).epsilon(1e-12));

  Eigen::VectorXcd zero(2), one(2);
  zero << 1, 0;
  one << 0, 1;
  const SchmidtDecomposition prod = schmidt(product_state(zero, Owner::A, one, Owner::B), kA, kB);
  CHECK(prod.coefficients(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prod.coefficients(1) == doctest::Approx(0.0).epsilon(1e-12));

  // seeded random 2x3-qubit state: rebuild sum_i c_i e_i (x) f_i
  RandomStream rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const PureState s =
        testing::random_pure_state(rng, {Owner::A, Owner::A, Owner::B, Owner::B, Owner::B});
    const SchmidtDecomposition sd = schmidt(s, kA, kB);
    Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(4, 8);
    for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i) {
      rebuilt += sd.coefficients(i) * sd.left_basis.col(i) * sd.right_basis.col(i).transpose();
    }
    CHECK((rebuilt - state_matrix(s, kA)).norm() <= 1e-10);
    // orthonormal bases
    CHECK((sd.left_basis.adjoint() * sd.left_basis - Eigen::MatrixXcd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    CHECK((sd.right_basis.adjoint() * sd.right_basis - Eigen::MatrixXcd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    // the two reductions share their positive spectrum
    const DensityMatrix ra = s.reduced(kA);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(ra.matrix(), Eigen::EigenvaluesOnly);
    Eigen::VectorXd lam = sd.coefficients.cwiseProduct(sd.coefficients);
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      CHECK(std::abs(lam(i) - ea.eigenvalues()(lam.size() - 1 - i)) <= 1e-9);
    }
  }

  CHECK_THROWS_AS(schmidt(bell_pair(), kA, kA), InvariantError);
}

TEST_CASE("fidelity: frozen two-dimensional cases") {
  Eigen::VectorXcd zero(2), one(2), plus(2);
  zero << 1, 0;
  one << 0, 1;
  plus << kInvSqrt2, kInvSqrt2;

  const DensityMatrix rz = pure_density(zero, 1);
  const DensityMatrix ro = pure_density(one, 1);
  const DensityMatrix rp = pure_density(plus, 1);

  CHECK(fidelity(rz, rz).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(rz, ro).value == doctest::Approx(0.0).epsilon(1e-9));
  // |<0|0_x>| = 1/sqrt(2) = 0.70711...
  CHECK(fidelity(rz, rp).value == doctest::Approx(kInvSqrt2).epsilon(1e-9));

  CHECK_THROWS_AS(fidelity(rz, pure_density(Eigen::VectorXcd::Unit(4, 0), 2)), InvariantError);
}

TEST_CASE("fidelity properties: pure overlap law, symmetry, unitary invariance") {
  RandomStream rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index dim = 4;
    const Eigen::VectorXcd u = testing::random_state_vector(rng, dim);
    const Eigen::VectorXcd v = testing::random_state_vector(rng, dim);
    const DensityMatrix ru = pure_density(u, 2);
    const DensityMatrix rv = pure_density(v, 2);
    const double f = fidelity(ru, rv).value;
    CHECK(std::abs(f - std::abs(u.dot(v))) <= 1e-9);
    CHECK(std::abs(f - fidelity(rv, ru).value) <= 1e-9);

    const Eigen::MatrixXcd w = testing::random_unitary(rng, dim);
    const DensityMatrix ru2 = pure_density(w * u, 2);
    const DensityMatrix rv2 = pure_density(w * v, 2);
    CHECK(std::abs(fidelity(ru2, rv2).value - f) <= 1e-9);
  }
}

TEST_CASE("trace_distance: frozen cases") {
  Eigen::VectorXcd zero(2), one(2);
  zero << 1, 0;
  one << 0, 1;
  const DensityMatrix rz = pure_density(zero, 1);
  const DensityMatrix ro = pure_density(one, 1);
  const DensityMatrix mixed(0.5 * Eigen::MatrixXcd::Identity(2, 2), {0});

  CHECK(trace_distance(rz, rz) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace_distance(rz, ro) == doctest::Approx(1.0).epsilon(1e-12));
  // eigenvalues of I/2 - |0><0| are +-1/2
  CHECK(trace_distance(mixed, rz) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("uhlmann_partner: fixed cases") {
  // rho0 equals the reduction: overlap 1
  const PureState bell = bell_pair();
  const DensityMatrix rho_b = bell.reduced(kB);
  const PureState partner = uhlmann_partner(rho_b, bell, kA);
  CHECK(partner.overlap(bell).real() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((partner.reduced(kB).matrix() - rho_b.matrix()).cwiseAbs().maxCoeff() <= 1e-9);

  // rho0 = |0><0|, psi1 = |0>_A (cos a |0> + sin a |1>)_B: overlap cos a
  for (double a : {0.3, 0.7, 1.2}) {
    Eigen::VectorXcd zero(2), coded(2);
    zero << 1, 0;
    coded << std::cos(a), std::sin(a);
    const PureState psi1 = product_state(zero, Owner::A, coded, Owner::B);
    const DensityMatrix rho0 = pure_density(zero, 1);
    const PureState p = uhlmann_partner(rho0, psi1, kA);
    CHECK(p.overlap(psi1).real() == doctest::Approx(std::cos(a)).epsilon(1e-9));
    CHECK((p.reduced(kB).matrix() - rho0.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
  }

  // orthogonal supports: overlap 0
  Eigen::VectorXcd zero(2), one(2);
  zero << 1, 0;
  one << 0, 1;
  const PureState psi1 = product_state(zero, Owner::A, one, Owner::B);
  const PureState p = uhlmann_partner(pure_density(zero, 1), psi1, kA);
  CHECK(std::abs(p.overlap(psi1)) <= 1e-9);
  CHECK((p.reduced(kB).matrix() - pure_density(zero, 1).matrix()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("uhlmann_partner: overlap equals fidelity and the search oracle") {
  RandomStream rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int qa = 1 + static_cast<int>(rng.next_u64() % 2);
    const int qb = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<Owner> owners;
    for (int i = 0; i < qa; ++i) owners.push_back(Owner::A);
    for (int i = 0; i < qb; ++i) owners.push_back(Owner::B);

    const PureState psi0 = testing::random_pure_state(rng, owners);
    const PureState psi1 = testing::random_pure_state(rng, owners);
    const DensityMatrix rho0 = psi0.reduced(kB);

    const PureState partner = uhlmann_partner(rho0, psi1, kA);
    const double overlap = partner.overlap(psi1).real();

    // Uhlmann: the best purification overlap is the fidelity
    const double f = fidelity(rho0, psi1.reduced(kB)).value;
    CHECK(std::abs(overlap - f) <= 1e-9);
    CHECK((partner.reduced(kB).matrix() - rho0.matrix()).cwiseAbs().maxCoeff() <= 1e-9);

    // independent search over parameterized purifications
    const double searched =
        testing::purification_search_max_overlap(rho0.matrix(), state_matrix(psi1, kA), rng);
    CHECK(std::abs(overlap - searched) <= 1e-6);
  }
}

TEST_CASE("steering_unitary: fixed cases") {
  // entangled coded pair onto itself: identity
  const PureState bell = bell_pair();
  PureState bell_diag = bell.applied(Unitary(gates::hadamard(), {0}, "H"));
  bell_diag = bell_diag.applied(Unitary(gates::hadamard(), {1}, "H"));
  const Unitary u = steering_unitary(bell, bell_diag, kA);
  CHECK((u.matrix() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-8);

  // (|00>+|11>)/sqrt2 -> (|10>+|01>)/sqrt2: bit flip on Alice's register
  PureState flipped = bell.applied(Unitary(gates::pauli_x(), {0}, "X"));
  const Unitary ux = steering_unitary(bell, flipped, kA);
  PureState mapped = bell.applied(ux);
  CHECK(std::abs(std::abs(mapped.overlap(flipped)) - 1.0) <= 1e-8);

  // product case |0>_A |phi>_B -> |1>_A |phi>_B
  Eigen::VectorXcd zero(2), one(2), phi(2);
  zero << 1, 0;
  one << 0, 1;
  phi << std::cos(0.4), std::sin(0.4);
  const PureState from = product_state(zero, Owner::A, phi, Owner::B);
  const PureState to = product_state(one, Owner::A, phi, Owner::B);
  const Unitary uf = steering_unitary(from, to, kA);
  CHECK((from.applied(uf).materialized_amplitudes() - to.materialized_amplitudes()).norm() <= 1e-8);

  // mismatched reductions are rejected with a pointer to uhlmann_partner
  Eigen::VectorXcd other(2);
  other << std::cos(1.0), std::sin(1.0);
  const PureState bad = product_state(zero, Owner::A, other, Owner::B);
  CHECK_THROWS_AS(steering_unitary(from, bad, kA), ProtocolViolation);
}

TEST_CASE("steering_unitary: random purification pairs, support on one side only") {
  RandomStream rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Owner> owners{Owner::A, Owner::A, Owner::B};
    const PureState from = testing::random_pure_state(rng, owners);
    // build a target with the same reduction: rotate the A side
    const Eigen::MatrixXcd w = testing::random_unitary(rng, 4);
    const PureState to = from.applied(Unitary(w, {0, 1}, "W"));

    const Unitary u = steering_unitary(from, to, kA);
    CHECK((from.applied(u).materialized_amplitudes() - to.materialized_amplitudes()).norm() <= 1e-8);

    // identity on the complement: basis states of B map to themselves
    const Eigen::MatrixXcd m = u.matrix();
    CHECK(m.rows() == 4);  // supported on the two A registers only
  }
}
