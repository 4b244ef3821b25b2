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

#include <cstdint>

namespace qbclab {

/// Deterministic random stream with counter-based substream splitting.
///
/// A stream is identified by (root_seed, stream_id). Substream k of a trial
/// batch is simply RandomStream(root_seed, k), so results are reproducible
/// independently of worker scheduling. The generator is splitmix64; the
/// stream id is folded into the initial state with a distinct odd constant
/// so neighbouring ids decorrelate.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t root_seed, std::uint64_t stream_id = 0)
      : state_(root_seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1))) {
    // burn-in so trivially related (seed, id) pairs diverge
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  int next_bit() { return static_cast<int>(next_u64() >> 63); }

 private:
  std::uint64_t state_;
};

}  // namespace qbclab
