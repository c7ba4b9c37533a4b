#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "llab/errors.hpp"
#include "llab/flow.hpp"
#include "llab/rational.hpp"

// Deterministic report emission: fixed decimal formatting, stable key order,
// versioned JSON schema.  Identical inputs produce byte-identical files.

namespace llab {

inline constexpr int kReportSchema = 1;

// fixed 12-digit scientific formatting so reports are byte-stable
inline std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << std::scientific << v;
  return os.str();
}

inline nlohmann::ordered_json report_root(const std::string& kind) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["kind"] = kind;
  return j;
}

struct ResidualRecord {
  std::string check;
  std::vector<double> point;
  double value = 0.0;
  double tolerance = 0.0;

  bool pass() const { return value < tolerance; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["check"] = check;
    nlohmann::ordered_json pt = nlohmann::ordered_json::array();
    for (double c : point) pt.push_back(format_real(c));
    j["point"] = pt;
    j["value"] = format_real(value);
    j["tolerance"] = format_real(tolerance);
    j["pass"] = pass();
    return j;
  }
};

inline nlohmann::ordered_json residual_report(const std::string& kind,
                                              const std::vector<ResidualRecord>& records) {
  auto j = report_root(kind);
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    arr.push_back(r.to_json());
    all = all && r.pass();
  }
  j["records"] = arr;
  j["pass"] = all;
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output path: " + path);
  out << text;
}

inline std::string trajectory_csv(const std::vector<TrajectorySample>& samples) {
  std::string out = "t,s,theta,A,phi\n";
  for (const auto& s : samples) {
    out += format_real(s.t) + "," + format_real(s.p.s) + "," + format_real(s.p.theta) + "," +
           format_real(s.p.A) + "," + format_real(s.p.phi) + "\n";
  }
  return out;
}

// CSV with header for external plotting; one row per sample.
inline void emit_plot_data(const std::vector<TrajectorySample>& samples,
                           const std::string& path) {
  write_text(path, trajectory_csv(samples));
}

inline void emit_plot_data(const std::vector<ResidualRecord>& records,
                           const std::string& path) {
  std::string out = "check,value,tolerance,pass\n";
  for (const auto& r : records)
    out += r.check + "," + format_real(r.value) + "," + format_real(r.tolerance) + "," +
           (r.pass() ? "1" : "0") + "\n";
  write_text(path, out);
}

}  // namespace llab
