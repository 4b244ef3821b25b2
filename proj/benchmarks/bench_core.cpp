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

#include <benchmark/benchmark.h>

#include "qbclab/random.hpp"
#include "qbclab/spectral.hpp"
#include "qbclab/state.hpp"

namespace {

using namespace qbclab;

PureState ghz_like(int qubits) {
  PureState s = zero_state(qubits, {}, qubits);
  s = s.applied(Unitary(gates::hadamard(), {0}, "H"));
  for (int i = 1; i < qubits; ++i) {
    s = s.applied(Unitary(gates::cnot(), {0, static_cast<RegisterId>(i)}, "CX"));
  }
  return s;
}

void BM_apply_single_qubit(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  PureState s = ghz_like(qubits);
  const Unitary h(gates::hadamard(), {static_cast<RegisterId>(qubits / 2)}, "H");
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.applied(h));
  }
  state.SetComplexityN(1 << qubits);
}
BENCHMARK(BM_apply_single_qubit)->DenseRange(4, 16, 2)->Complexity();

void BM_apply_two_qubit(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  PureState s = ghz_like(qubits);
  const Unitary cx(gates::cnot(), {0, static_cast<RegisterId>(qubits - 1)}, "CX");
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.applied(cx));
  }
  state.SetComplexityN(1 << qubits);
}
BENCHMARK(BM_apply_two_qubit)->DenseRange(4, 16, 2)->Complexity();

void BM_measure_branches(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  const PureState s = ghz_like(qubits);
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.measurement_branches(0));
  }
  state.SetComplexityN(1 << qubits);
}
BENCHMARK(BM_measure_branches)->DenseRange(4, 14, 2)->Complexity();

void BM_partial_trace_half(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  std::vector<Owner> owners;
  for (int i = 0; i < qubits; ++i) owners.push_back(i < qubits / 2 ? Owner::A : Owner::B);
  RandomStream rng(5);
  Eigen::VectorXcd v(Eigen::Index(1) << qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = cxd(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
  }
  v.normalize();
  std::vector<Register> regs;
  for (int i = 0; i < qubits; ++i) {
    regs.push_back(Register{static_cast<RegisterId>(i), owners[static_cast<size_t>(i)], false, -1});
  }
  const PureState s = state_from_amplitudes(v, regs, qubits);
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.reduced({Owner::B}));
  }
}
BENCHMARK(BM_partial_trace_half)->DenseRange(4, 12, 2);

void BM_schmidt(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  std::vector<Owner> owners;
  for (int i = 0; i < qubits; ++i) owners.push_back(i < qubits / 2 ? Owner::A : Owner::B);
  RandomStream rng(7);
  Eigen::VectorXcd v(Eigen::Index(1) << qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = cxd(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
  }
  v.normalize();
  std::vector<Register> regs;
  for (int i = 0; i < qubits; ++i) {
    regs.push_back(Register{static_cast<RegisterId>(i), owners[static_cast<size_t>(i)], false, -1});
  }
  const PureState s = state_from_amplitudes(v, regs, qubits);
  for (auto _ : state) {
    benchmark::DoNotOptimize(schmidt(s, {Owner::A}, {Owner::B}));
  }
}
BENCHMARK(BM_schmidt)->DenseRange(4, 12, 2);

void BM_fidelity(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  const Eigen::Index dim = Eigen::Index(1) << qubits;
  RandomStream rng(11);
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c2 = 0; c2 < dim; ++c2) g(r, c2) = cxd(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
  }
  Eigen::MatrixXcd m = g * g.adjoint();
  m /= m.trace().real();
  std::vector<std::uint32_t> ids;
  for (int i = 0; i < qubits; ++i) ids.push_back(static_cast<std::uint32_t>(i));
  const DensityMatrix rho(m, ids);
  const DensityMatrix sigma(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim), ids);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity(rho, sigma));
  }
}
BENCHMARK(BM_fidelity)->DenseRange(2, 7, 1);

}  // namespace

BENCHMARK_MAIN();
