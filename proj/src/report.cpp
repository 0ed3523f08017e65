#include "kbend/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace kbend {

ResidualReport make_report(std::string identity, std::span<const double> residuals,
                           double tolerance, bool control) {
  ResidualReport r;
  r.identity = std::move(identity);
  r.points = residuals.size();
  r.tolerance = tolerance;
  r.control = control;
  if (residuals.empty()) {
    r.pass = false;
    return r;
  }
  r.max_residual = *std::max_element(residuals.begin(), residuals.end());
  r.min_residual = *std::min_element(residuals.begin(), residuals.end());
  r.mean_residual =
      std::accumulate(residuals.begin(), residuals.end(), 0.0) / static_cast<double>(residuals.size());
  // NaN residuals never pass in either direction.
  const bool finite = std::all_of(residuals.begin(), residuals.end(),
                                  [](double x) { return !std::isnan(x); });
  r.pass = finite && (control ? r.min_residual > tolerance : r.max_residual < tolerance);
  return r;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "1e308" : "-1e308";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_json(const ResidualReport& r) {
  std::ostringstream os;
  os << "{\"identity\": " << quote(r.identity) << ", \"points\": " << r.points
     << ", \"max_residual\": " << format_double(r.max_residual)
     << ", \"mean_residual\": " << format_double(r.mean_residual)
     << ", \"min_residual\": " << format_double(r.min_residual)
     << ", \"tolerance\": " << format_double(r.tolerance)
     << ", \"pass\": " << (r.pass ? "true" : "false");
  if (r.control) os << ", \"control\": true";
  if (r.skipped) os << ", \"skipped\": " << r.skipped;
  os << "}";
  return os.str();
}

std::string to_json(std::span<const ResidualReport> reports) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += "  " + to_json(reports[i]);
    out += (i + 1 < reports.size()) ? ",\n" : "\n";
  }
  return out + "]\n";
}

std::string to_text_table(std::span<const ResidualReport> reports) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %7s %12s %12s %12s  %s\n", "identity", "points", "max",
                "mean", "tolerance", "verdict");
  os << line;
  for (const auto& r : reports) {
    const char* verdict = r.control ? (r.pass ? "expected-fail" : "CONTROL-PASSED")
                                    : (r.pass ? "pass" : "FAIL");
    std::snprintf(line, sizeof line, "%-34s %7zu %12.4e %12.4e %12.4e  %s\n", r.identity.c_str(),
                  r.points, r.max_residual, r.mean_residual, r.tolerance, verdict);
    os << line;
  }
  return os.str();
}

}  // namespace kbend
