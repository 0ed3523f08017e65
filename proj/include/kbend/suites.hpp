#pragma once

// Registered verification suites.  Each suite runs a group of identities on a
// Weierstrass seed and returns one ResidualReport per identity.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kbend/report.hpp"
#include "kbend/seed_io.hpp"
#include "kbend/weierstrass.hpp"

namespace kbend {

struct SuiteContext {
  WeierstrassSeed seed;
  std::vector<Vec> samples;  // chart coordinates of f
  std::map<std::string, double> tolerances;
  std::uint64_t rng_seed = 20240601;

  double tol(const std::string& identity, double fallback) const;
};

struct SuiteInfo {
  std::string name;
  std::string description;
  bool control = false;
};

const std::vector<SuiteInfo>& registered_suites();
bool is_registered_suite(const std::string& name);

/// Default sample set: a grid of 10 x 10 nodes for n = 1, 4 x 4 x 3 x 3 for
/// n = 2 and 3 per axis beyond that, unless the spec overrides it.
std::vector<Vec> suite_samples(const WeierstrassSeed& seed, const SamplingSpec& spec);

std::vector<ResidualReport> run_suite(const std::string& name, const SuiteContext& ctx);

struct SuiteRun {
  std::vector<ResidualReport> reports;
  std::vector<std::string> errors;  // "<suite>: <message>" for suites that threw
  /// Every non-control report passes and no suite threw.
  bool ok() const;
};

/// Runs the suites in order; "all" expands to every registered suite.
SuiteRun run_suites(const std::vector<std::string>& names, const SuiteContext& ctx);

/// Step used by the finite-difference identities; their default tolerance is
/// ten times its square.
double suite_fd_step();

}  // namespace kbend
