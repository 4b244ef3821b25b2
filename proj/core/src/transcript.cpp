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

#include "qbclab/transcript.hpp"

namespace qbclab {

int ClassicalTranscript::record_private(Party p, int bit) {
  auto& xi = p == Party::Alice ? xi_a_ : xi_b_;
  xi.push_back(bit);
  return static_cast<int>(xi.size()) - 1;
}

std::string ClassicalTranscript::xi_s_string() const {
  std::string s;
  for (const auto& e : xi_s_) s += e.bit ? '1' : '0';
  return s;
}

std::string ClassicalTranscript::xi_string(Party p) const {
  std::string s;
  for (int b : xi(p)) s += b ? '1' : '0';
  return s;
}

std::string ClassicalTranscript::gamma_key() const {
  std::string s;
  for (const auto& e : xi_s_) {
    s += e.sender == Party::Alice ? 'A' : 'B';
    s += e.bit ? '1' : '0';
  }
  return s;
}

std::string ClassicalTranscript::eta_key() const { return gamma_key() + "|" + xi_string(Party::Bob); }

ClassicalTranscript transmit_classical(const ClassicalTranscript& t, Party sender, int bit_slot) {
  const auto& xi = t.xi(sender);
  if (bit_slot < 0 || bit_slot >= static_cast<int>(xi.size())) {
    throw ProtocolViolation(to_string(sender) + " transmits bit slot " + std::to_string(bit_slot) +
                            " which was never generated");
  }
  ClassicalTranscript out = t;
  out.xi_s_.push_back(TranscriptEntry{xi[bit_slot], sender});
  return out;
}

}  // namespace qbclab
