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

#include "qbclab/common.hpp"

namespace qbclab {

std::string to_string(Owner o) {
  switch (o) {
    case Owner::A: return "A";
    case Owner::B: return "B";
    case Owner::EA: return "E_A";
    case Owner::EB: return "E_B";
    case Owner::SA: return "S_A";
    case Owner::SB: return "S_B";
  }
  return "?";
}

std::string to_string(Party p) { return p == Party::Alice ? "Alice" : "Bob"; }

std::string to_string(Basis b) { return b == Basis::Plus ? "+" : "x"; }

}  // namespace qbclab
