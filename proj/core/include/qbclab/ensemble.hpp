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

namespace qbclab {

/// A weighted set of collapsed branches of one pre-measurement pure state.
/// All members must share the register layout up to the recorded values of
/// consumed registers; the branches are mutually orthogonal through those
/// records, so sum_i sqrt(p_i) |state_i> recovers the pre-measurement state.
struct WeightedBranch {
  double probability = 0.0;
  const PureState* state = nullptr;
};
using BranchEnsemble = std::vector<WeightedBranch>;

/// Coherent reconstruction sum_i sqrt(p_i / p_total) |state_i> as a fully
/// live state. Probabilities need not sum to 1; they are renormalized.
PureState coherent_state(const BranchEnsemble& branches);

/// Reduced density matrix of the reconstructed state over the registers
/// whose owner is in `keep`. Equivalent to
/// partial_trace(coherent_state(...), keep) but computed without expanding
/// the full vector: records held in kept registers keep their coherences,
/// records in traced registers decohere into a mixture.
DensityMatrix ensemble_reduced(const BranchEnsemble& branches, const std::vector<Owner>& keep);

/// Fidelity between the kept-side reductions of two reconstructed states,
/// computed from cross-Gram matrices over the traced side (low rank), never
/// materializing the kept-side density matrices.
double ensemble_reduction_fidelity(const BranchEnsemble& e0, const BranchEnsemble& e1,
                                   const std::vector<Owner>& keep);

/// Trace distance between the kept-side reductions of two reconstructed
/// states, via the Gram matrix of the stacked low-rank factors.
double ensemble_reduction_trace_distance(const BranchEnsemble& e0, const BranchEnsemble& e1,
                                         const std::vector<Owner>& keep);

}  // namespace qbclab
