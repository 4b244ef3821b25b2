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

#include "qbclab/attack.hpp"
#include "qbclab/protocols.hpp"

namespace {

using namespace qbclab;

ExecOptions quiet() {
  ExecOptions o;
  o.record_log = false;
  return o;
}

void BM_commit_trial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto spec = bb84_protocol(n);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    RandomStream stream(1, trial++);
    benchmark::DoNotOptimize(run_commit(spec, spec->honest_alice, spec->honest_bob, 0, stream, quiet()));
  }
}
BENCHMARK(BM_commit_trial)->DenseRange(1, 8, 1);

void BM_enumerate_commit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto spec = bb84_protocol(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        enumerate_branches(spec, spec->honest_alice, spec->honest_bob, 0, quiet()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(std::pow(6.0, n)));
}
BENCHMARK(BM_enumerate_commit)->DenseRange(1, 5, 1);

void BM_fidelity_audit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto spec = bb84_protocol(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity_audit(spec, quiet()));
  }
}
BENCHMARK(BM_fidelity_audit)->DenseRange(1, 6, 1);

void BM_attack_synthesis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto spec = bb84_protocol(n);
  RandomStream rng(3);
  const Execution exec = run_commit(spec, commit_prime(spec), spec->honest_bob, 0, rng, quiet());
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_unveil_prime(exec, 1, quiet()));
  }
}
BENCHMARK(BM_attack_synthesis)->DenseRange(1, 4, 1);

void BM_attack_trial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto spec = bb84_protocol(n);
  const Strategy cp = commit_prime(spec);
  RandomStream rng(9);
  const Execution exec = run_commit(spec, cp, spec->honest_bob, 0, rng, quiet());
  const SynthesizedUnveil synth = synthesize_unveil_prime(exec, 1, quiet());
  std::uint64_t trial = 0;
  for (auto _ : state) {
    RandomStream stream(2, trial++);
    const Execution e = run_commit(spec, cp, spec->honest_bob, 0, stream, quiet());
    benchmark::DoNotOptimize(run_unveil(e, synth.strategy, spec->honest_bob, stream, 1, quiet()));
  }
}
BENCHMARK(BM_attack_trial)->DenseRange(1, 6, 1);

}  // namespace
