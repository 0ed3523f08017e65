#pragma once

// JSON ingestion of seeds and run configurations, and the chart bundle
// written by `kbend generate`.  Complex numbers are [re, im] pairs.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kbend/weierstrass.hpp"

namespace kbend {

using json = nlohmann::ordered_json;

class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

/// {"basepoint": [re, im], "coeffs": [[re, im], ...]}; a bare coefficient
/// list uses `default_base`.
TruncatedSeries series_from_json(const json& j, cplx default_base);
json series_to_json(const TruncatedSeries& s);

/// Keys: n, alpha0, mu, b, constants (n + 1 vectors for phi_0..phi_n),
/// F_constant, domain {center, radius, w_box}, trunc_order.
WeierstrassSeed seed_from_json(const json& j);
json seed_to_json(const WeierstrassSeed& seed);

struct SamplingSpec {
  std::vector<int> counts;      // grid nodes per chart coordinate; empty = default
  std::size_t random = 0;       // > 0 switches to uniform random samples
  std::uint64_t seed = 1;
};

struct ExportSpec {
  std::string slice;            // "x,y" or "x,y:u1=0.1,v1=0"
  std::string surface = "f";    // f, fbar or theta
  double theta = 0.0;
  std::vector<int> counts{21, 21};
  int sweep = 0;                // > 0 writes that many frames of the associated family
  std::string prefix;           // file stem; defaults to the seed name
};

struct RunConfig {
  std::string seed_name;        // built-in name or "custom"
  WeierstrassSeed seed;
  std::vector<std::string> suites;
  SamplingSpec sampling;
  std::map<std::string, double> tolerances;
  ExportSpec export_spec;
  std::string out_dir = "kbend_out";
  std::uint64_t rng_seed = 20240601;
};

json default_config_json();
/// Missing keys take the defaults.  `seed` is a built-in name, an inline
/// seed object, or absent when `bundle` names a file written by generate.
RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
json config_to_json(const RunConfig& cfg);

/// The chain (every series coefficient) plus chart metadata and the seed.
json bundle_json(const std::string& name, const WeierstrassSeed& seed);
WeierstrassSeed seed_from_bundle(const json& bundle);

json read_json_file(const std::filesystem::path& path);
/// Pretty-printed; floats use the shortest round-trip form.
std::string dump_json(const json& j);

}  // namespace kbend
