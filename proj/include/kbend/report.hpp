#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kbend {

/// Residuals of one identity over a sample set.  Negative controls invert
/// the verdict: they pass when every residual exceeds the threshold.
struct ResidualReport {
  std::string identity;
  std::size_t points = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double min_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool control = false;
  std::size_t skipped = 0;
};

ResidualReport make_report(std::string identity, std::span<const double> residuals,
                           double tolerance, bool control = false);

/// 17 significant digits, locale independent.
std::string format_double(double x);

std::string to_json(const ResidualReport& r);
std::string to_json(std::span<const ResidualReport> reports);
std::string to_text_table(std::span<const ResidualReport> reports);

}  // namespace kbend
