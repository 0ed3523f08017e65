#pragma once

// The three batch commands behind the `kbend` executable.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kbend/seed_io.hpp"
#include "kbend/suites.hpp"

namespace kbend {

/// Writes <out_dir>/<name>.bundle.json and returns its path.
std::filesystem::path cmd_generate(const RunConfig& cfg);

struct VerifyResult {
  SuiteRun run;
  std::filesystem::path json_path;
  std::filesystem::path text_path;
  int exit_code() const { return run.ok() ? 0 : 1; }
};

/// Runs `suites` (the config's list when empty) and writes
/// <out_dir>/<name>.report.json and <name>.report.txt.
VerifyResult cmd_verify(const RunConfig& cfg, const std::vector<std::string>& suites = {});

/// The report document: seed name, suites, verdict, suite errors, reports.
std::string verify_report_json(const std::string& name, const std::vector<std::string>& suites,
                               const SuiteRun& run);

/// Exports the config's slice, or `slice_override` when given.  A positive
/// sweep writes that many frames of the associated family instead of one
/// surface.
std::vector<std::filesystem::path> cmd_export(const RunConfig& cfg,
                                              const std::optional<std::string>& slice_override = {},
                                              std::optional<int> sweep_override = {});

}  // namespace kbend
