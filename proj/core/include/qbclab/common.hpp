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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbclab {

using cxd = std::complex<double>;

/// Identifies one qubit register for the lifetime of an execution.
/// Ids are assigned sequentially in allocation order.
using RegisterId = std::uint32_t;

/// Who holds a register: one of the two party areas, the per-party
/// environment stores for measured (classical) content, or the shared
/// classical-transmission stores.
enum class Owner : std::uint8_t { A, B, EA, EB, SA, SB };

enum class Party : std::uint8_t { Alice, Bob };

/// Single-qubit measurement/coding basis: Plus is the computational
/// (rectilinear) basis, Times the diagonal one.
enum class Basis : std::uint8_t { Plus, Times };

inline Owner area_of(Party p) { return p == Party::Alice ? Owner::A : Owner::B; }
inline Owner environment_of(Party p) { return p == Party::Alice ? Owner::EA : Owner::EB; }
inline Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }

std::string to_string(Owner o);
std::string to_string(Party p);
std::string to_string(Basis b);

// Numerical tolerances shared across the library. Values are part of the
// public contract of the operations that cite them.
namespace tol {
inline constexpr double kStateNorm = 1e-12;
inline constexpr double kProbability = 1e-12;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-10;  // below this: reject, above: clamp to 0
inline constexpr double kUnitary = 1e-10;
inline constexpr double kSpectra = 1e-9;
inline constexpr double kReductionMatch = 1e-8;  // steering precondition
inline constexpr double kSteering = 1e-8;
inline constexpr double kBranchPrune = 1e-14;
}  // namespace tol

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical invariant of a domain type was violated (norm drift,
/// non-unitary matrix, non-PSD density, ...).
struct InvariantError : Error {
  using Error::Error;
};

/// A configured cap (register count, branch count) was exceeded.
struct ResourceError : Error {
  using Error::Error;
};

/// A strategy touched state it does not own, or a phase was misused.
struct ProtocolViolation : Error {
  using Error::Error;
};

/// Bad experiment/CLI configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace qbclab
