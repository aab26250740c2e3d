#pragma once

// Check reports shared by the command-line front end and the acceptance
// runner. JSON via nlohmann, CSV with one header row and 17 significant
// digits.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hkfold::report {

/// Upper checks pass when max_residual <= tol; lower checks are controls
/// that pass when the violation reaches tol.
enum class Bound { Upper, Lower };

struct Check {
  std::string name;
  long n = 0;
  double max_residual = 0.0;
  double tol = 0.0;
  Bound bound = Bound::Upper;
  bool pass = false;
};

inline Check make_check(std::string name, long n, double residual, double tol, Bound bound = Bound::Upper) {
  Check c{std::move(name), n, residual, tol, bound, false};
  c.pass = std::isfinite(residual) && (bound == Bound::Upper ? residual <= tol : residual >= tol);
  return c;
}

struct Report {
  std::string suite;
  std::vector<Check> checks;
  std::optional<double> wall_time;  ///< seconds; omitted unless requested, to keep output reproducible
  std::vector<std::string> diagnostics;  ///< solver failures behind non-finite residuals

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["n"] = c.n;
    // JSON has no infinity or NaN; null marks a non-finite residual.
    if (std::isfinite(c.max_residual))
      e["max_residual"] = c.max_residual;
    else
      e["max_residual"] = nullptr;
    e["tol"] = c.tol;
    e["bound"] = c.bound == Bound::Upper ? "upper" : "lower";
    e["pass"] = c.pass;
    j["checks"].push_back(e);
  }
  j["pass"] = r.pass();
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
  if (r.wall_time)
    j["wall_time"] = *r.wall_time;
  else
    j["wall_time"] = nullptr;
  return j;
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Columns: suite,name,n,max_residual,tol,bound,pass
inline void write_csv(std::ostream& os, const Report& r) {
  os << "suite,name,n,max_residual,tol,bound,pass\n";
  for (const auto& c : r.checks)
    os << r.suite << ',' << c.name << ',' << c.n << ',' << fmt17(c.max_residual) << ',' << fmt17(c.tol) << ','
       << (c.bound == Bound::Upper ? "upper" : "lower") << ',' << (c.pass ? "true" : "false") << '\n';
}

}  // namespace hkfold::report
