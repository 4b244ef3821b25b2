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

#include "qbclab/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qbclab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ordered_json measured_to_json(const Measured& m) {
  if (!m.present) return nullptr;
  ordered_json j;
  j["value"] = m.value;
  j["exact"] = m.exact;
  if (!m.exact) j["stderr"] = m.stderror;
  return j;
}

Measured measured_from_json(const ordered_json& j) {
  Measured m;
  if (j.is_null()) return m;
  m.present = true;
  m.value = j.at("value").get<double>();
  m.exact = j.at("exact").get<bool>();
  m.stderror = j.contains("stderr") ? j.at("stderr").get<double>() : 0.0;
  return m;
}

// column triple per measured field keeps the CSV schema flat
void csv_measured(std::ostringstream& os, const Measured& m) {
  if (m.present) {
    os << "," << fmt12(m.value) << "," << (m.exact ? "1" : "0") << ","
       << (m.exact ? "" : fmt12(m.stderror));
  } else {
    os << ",,,";
  }
}

const char* const kMeasuredColumns[] = {
    "concealment_fidelity", "key_marginal_distance", "trace_distance_b",  "fprime",
    "honest_bot_rate",      "mc_honest_bot_rate",    "attack_success_uncond",
    "attack_success_cond",  "attack_bot_rate",       "mc_attack_success_uncond",
    "bound_f",              "steering_identity_dev", "partner_overlap",
    "cheat_success",        "mc_cheat_success",      "cheat_success_optimal",
};

std::vector<const Measured*> measured_fields(const PointRecord& r) {
  return {&r.concealment_fidelity, &r.key_marginal_distance, &r.trace_distance_b,
          &r.fprime,               &r.honest_bot_rate,       &r.mc_honest_bot_rate,
          &r.attack_success_uncond, &r.attack_success_cond,  &r.attack_bot_rate,
          &r.mc_attack_success_uncond, &r.bound_f,           &r.steering_identity_dev,
          &r.partner_overlap,      &r.cheat_success,         &r.mc_cheat_success,
          &r.cheat_success_optimal};
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "both") return ReportFormat::Both;
  throw ConfigError("unknown format '" + s + "' (expected json, csv or both)");
}

std::string report_to_json(const Report& report) {
  ordered_json j;
  j["schema_version"] = report.schema_version;

  ordered_json cfg;
  cfg["kind"] = to_string(report.config.kind);
  cfg["fixture"] = report.config.fixture;
  cfg["n_values"] = report.config.n_values;
  cfg["alpha_values"] = report.config.alpha_values;
  cfg["trials"] = report.config.trials;
  cfg["seed"] = report.config.seed;
  cfg["mode"] = to_string(report.config.mode);
  cfg["register_cap"] = report.config.register_cap;
  cfg["branch_cap"] = report.config.branch_cap;
  cfg["sigma_band"] = report.config.sigma_band;
  j["config"] = cfg;

  ordered_json points = ordered_json::array();
  for (const auto& p : report.points) {
    ordered_json rec;
    rec["fixture"] = p.fixture;
    rec["param_name"] = p.param_name;
    rec["param_value"] = p.param_value;
    const auto fields = measured_fields(p);
    for (size_t i = 0; i < fields.size(); ++i) rec[kMeasuredColumns[i]] = measured_to_json(*fields[i]);
    rec["bound_checked"] = p.bound_checked;
    rec["bound_ok"] = p.bound_ok;
    rec["mc_checked"] = p.mc_checked;
    rec["mc_within_band"] = p.mc_within_band;
    points.push_back(std::move(rec));
  }
  j["points"] = points;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  Report report;
  report.schema_version = j.at("schema_version").get<int>();

  const auto& cfg = j.at("config");
  report.config.kind = [&] {
    const std::string k = cfg.at("kind").get<std::string>();
    if (k == "audit") return ExperimentKind::Audit;
    if (k == "attack") return ExperimentKind::Attack;
    if (k == "oracle") return ExperimentKind::Oracle;
    throw ConfigError("unknown experiment kind '" + k + "'");
  }();
  report.config.fixture = cfg.at("fixture").get<std::string>();
  report.config.n_values = cfg.at("n_values").get<std::vector<int>>();
  report.config.alpha_values = cfg.at("alpha_values").get<std::vector<double>>();
  report.config.trials = cfg.at("trials").get<long>();
  report.config.seed = cfg.at("seed").get<std::uint64_t>();
  report.config.mode = run_mode_from_string(cfg.at("mode").get<std::string>());
  report.config.register_cap = cfg.at("register_cap").get<int>();
  report.config.branch_cap = cfg.at("branch_cap").get<long>();
  report.config.sigma_band = cfg.at("sigma_band").get<double>();

  for (const auto& rec : j.at("points")) {
    PointRecord p;
    p.fixture = rec.at("fixture").get<std::string>();
    p.param_name = rec.at("param_name").get<std::string>();
    p.param_value = rec.at("param_value").get<double>();
    std::vector<Measured*> fields = {&p.concealment_fidelity, &p.key_marginal_distance,
                                     &p.trace_distance_b,     &p.fprime,
                                     &p.honest_bot_rate,      &p.mc_honest_bot_rate,
                                     &p.attack_success_uncond, &p.attack_success_cond,
                                     &p.attack_bot_rate,      &p.mc_attack_success_uncond,
                                     &p.bound_f,              &p.steering_identity_dev,
                                     &p.partner_overlap,      &p.cheat_success,
                                     &p.mc_cheat_success,     &p.cheat_success_optimal};
    for (size_t i = 0; i < fields.size(); ++i) {
      *fields[i] = measured_from_json(rec.at(kMeasuredColumns[i]));
    }
    p.bound_checked = rec.at("bound_checked").get<bool>();
    p.bound_ok = rec.at("bound_ok").get<bool>();
    p.mc_checked = rec.at("mc_checked").get<bool>();
    p.mc_within_band = rec.at("mc_within_band").get<bool>();
    report.points.push_back(std::move(p));
  }
  return report;
}

std::string report_to_csv(const Report& report) {
  std::ostringstream os;
  os << "schema_version,fixture,param_name,param_value";
  for (const char* col : kMeasuredColumns) {
    os << "," << col << "," << col << "_exact," << col << "_stderr";
  }
  os << ",bound_checked,bound_ok,mc_checked,mc_within_band\n";

  for (const auto& p : report.points) {
    os << report.schema_version << "," << p.fixture << "," << p.param_name << ","
       << fmt12(p.param_value);
    for (const Measured* m : measured_fields(p)) csv_measured(os, *m);
    os << "," << (p.bound_checked ? 1 : 0) << "," << (p.bound_ok ? 1 : 0) << ","
       << (p.mc_checked ? 1 : 0) << "," << (p.mc_within_band ? 1 : 0) << "\n";
  }
  return os.str();
}

std::vector<std::string> emit_report(const Report& report, const std::string& out_dir,
                                     ReportFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error("cannot create output directory '" + out_dir + "': " + ec.message());
  }
  std::vector<std::string> written;
  const auto write = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw Error("write failed for '" + path.string() + "'");
    written.push_back(path.string());
  };
  if (format == ReportFormat::Json || format == ReportFormat::Both) {
    write("report.json", report_to_json(report));
  }
  if (format == ReportFormat::Csv || format == ReportFormat::Both) {
    write("report.csv", report_to_csv(report));
  }
  return written;
}

}  // namespace qbclab
