#pragma once

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace stc {

// One verification record: residual vs tolerance for a named check.
struct CheckReport {
  std::string check;
  double residual = 0;
  double tol = 0;
  bool pass = false;
  std::vector<std::string> notes;

  static CheckReport make(std::string id, double residual, double tol,
                          std::vector<std::string> notes = {}) {
    CheckReport r;
    r.check = std::move(id);
    r.residual = residual;
    r.tol = tol;
    r.pass = residual <= tol;
    r.notes = std::move(notes);
    return r;
  }
};

inline nlohmann::ordered_json report_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["residual"] = r.residual;
  j["tol"] = r.tol;
  j["pass"] = r.pass;
  j["notes"] = r.notes;
  return j;
}

// Deterministic aggregation: records sorted by check id, then a summary
// object; emitted as newline-delimited JSON.
struct ReportSet {
  std::vector<CheckReport> reports;

  void add(CheckReport r) { reports.push_back(std::move(r)); }
  void add(const ReportSet& o) {
    reports.insert(reports.end(), o.reports.begin(), o.reports.end());
  }

  bool all_pass() const {
    for (const auto& r : reports)
      if (!r.pass) return false;
    return true;
  }

  void sort() {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const CheckReport& a, const CheckReport& b) {
                       return a.check < b.check;
                     });
  }

  std::string ndjson() const {
    std::string out;
    int failed = 0;
    for (const auto& r : reports) {
      out += report_json(r).dump();
      out += '\n';
      if (!r.pass) ++failed;
    }
    nlohmann::ordered_json s;
    s["summary"] = true;
    s["checks"] = reports.size();
    s["failed"] = failed;
    s["pass"] = failed == 0;
    out += s.dump();
    out += '\n';
    return out;
  }

  void table(std::ostream& os) const {
    size_t w = 5;
    for (const auto& r : reports) w = std::max(w, r.check.size());
    for (const auto& r : reports) {
      os << std::left << std::setw(int(w) + 2) << r.check
         << (r.pass ? "pass" : "FAIL") << "  residual=" << std::scientific
         << std::setprecision(3) << r.residual << "  tol=" << r.tol;
      for (const auto& n : r.notes) os << "  [" << n << "]";
      os << "\n";
    }
    int failed = 0;
    for (const auto& r : reports)
      if (!r.pass) ++failed;
    os << reports.size() << " checks, " << failed << " failed\n";
  }
};

}  // namespace stc
