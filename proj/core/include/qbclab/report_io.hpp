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

#include "qbclab/experiment.hpp"

namespace qbclab {

enum class ReportFormat : std::uint8_t { Json, Csv, Both };
ReportFormat report_format_from_string(const std::string& s);

/// JSON document: config echo plus one record per sweep point. Key order and
/// number rendering are fixed, so equal reports serialize to equal bytes.
std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);

/// CSV: schema_version column first, stable header, one row per point,
/// numbers with 12 significant digits, empty cells for absent values.
std::string report_to_csv(const Report& report);

/// Writes report.json / report.csv (per format) under out_dir; returns the
/// paths written. I/O failures carry the path in the exception text.
std::vector<std::string> emit_report(const Report& report, const std::string& out_dir,
                                     ReportFormat format);

}  // namespace qbclab
