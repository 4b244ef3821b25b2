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

#include <memory>
#include <vector>

#include "qbclab/protocol.hpp"

namespace qbclab {

/// BB84 bit commitment. Alice draws w_1..w_n with the Hadamard-and-measure
/// random bit mechanism, codes each w_i in the rectilinear basis to commit 0
/// or the diagonal basis to commit 1 (the coding basis is used for both the
/// kept random-bit register and the transmitted one), and ships the coded
/// registers. Bob draws a basis per position the same way and measures.
/// Unveil: Alice announces w; Bob decodes from the disagreement positions.
std::shared_ptr<const ProtocolSpec> bb84_protocol(int n, int register_cap = kDefaultRegisterCap);

/// Bob's decode rule: every position where the announced w and his outcome
/// disagree implies the coding basis differs from his measurement basis
/// there. Consistent implications yield the bit; conflicting ones or no
/// disagreements at all yield Inconclusive.
UnveilResult bb84_decode(const std::vector<int>& w, const std::vector<int>& w_hat,
                         const std::vector<Basis>& theta_hat);

/// Alice keeps halves of entangled pairs instead of measuring her random
/// bits, then at unveil time measures them in the basis of whichever bit she
/// now prefers and announces the outcomes.
Strategy epr_attack_strategy(int n);

/// Alice commits honestly to 0; to unveil 1 she announces w with the first
/// position flipped.
Strategy classical_guess_strategy(int n);

/// Exact success probability of the flip-one cheat by enumeration: the
/// closed form is (1/2)(3/4)^(n-1).
double classical_guess_success(int n, const ExecOptions& opts = {});

/// Best single-announcement cheat success over all flip masks, enumerated
/// exactly (intended for small n).
double optimal_classical_guess_success(int n, const ExecOptions& opts = {});

/// Minimal tunable-concealment commitment: b = 0 is coded as |0> on Bob's
/// register, b = 1 as cos(a)|0> + sin(a)|1>; Alice keeps a spectator qubit.
/// Unveil: Alice announces a bit, Bob projects onto the announced coding and
/// accepts or returns Inconclusive.
std::shared_ptr<const ProtocolSpec> toy_protocol(double alpha, int register_cap = kDefaultRegisterCap);

/// Bob who does nothing during commit; exposes the raw committed quantum
/// state for concealment inspection.
Strategy passive_bob();

}  // namespace qbclab
