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

#include <string>
#include <vector>

#include "qbclab/common.hpp"

namespace qbclab {

/// One transmitted classical bit, visible to both parties.
struct TranscriptEntry {
  int bit = 0;
  Party sender = Party::Alice;
};

/// Classical side of an execution branch: the transmitted string, each
/// party's private bits, and the probability of the branch.
class ClassicalTranscript {
 public:
  ClassicalTranscript() = default;

  const std::vector<TranscriptEntry>& xi_s() const { return xi_s_; }
  const std::vector<int>& xi(Party p) const { return p == Party::Alice ? xi_a_ : xi_b_; }
  double branch_probability() const { return branch_probability_; }

  /// Records a bit the party produced (measurement outcome, random bit, or
  /// an explicit choice). Returns the bit's slot index.
  int record_private(Party p, int bit);

  void scale_probability(double factor) { branch_probability_ *= factor; }

  /// Transmitted bits as a compact string, most recent last.
  std::string xi_s_string() const;
  std::string xi_string(Party p) const;

  /// Branch key of the transmitted string including sender tags.
  std::string gamma_key() const;
  /// Branch key of (transmitted string, Bob's private bits).
  std::string eta_key() const;

  friend ClassicalTranscript transmit_classical(const ClassicalTranscript&, Party, int);

 private:
  std::vector<TranscriptEntry> xi_s_;
  std::vector<int> xi_a_;
  std::vector<int> xi_b_;
  double branch_probability_ = 1.0;
};

/// Appends the sender's previously recorded bit (by slot) to the
/// transmitted string. Throws ProtocolViolation when the slot was never
/// produced by that sender.
ClassicalTranscript transmit_classical(const ClassicalTranscript& t, Party sender, int bit_slot);

}  // namespace qbclab
