#include "kbend/commands.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "kbend/export.hpp"
#include "kbend/report.hpp"

namespace kbend {

namespace {

std::string stem_of(const RunConfig& cfg) {
  return cfg.seed_name.empty() ? std::string("custom") : cfg.seed_name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

std::filesystem::path cmd_generate(const RunConfig& cfg) {
  const auto path = std::filesystem::path(cfg.out_dir) / (stem_of(cfg) + ".bundle.json");
  write_text(path, dump_json(bundle_json(stem_of(cfg), cfg.seed)) + "\n");
  return path;
}

std::string verify_report_json(const std::string& name, const std::vector<std::string>& suites,
                               const SuiteRun& run) {
  std::ostringstream os;
  os << "{\n\"seed\": " << json(name).dump() << ",\n\"suites\": " << json(suites).dump()
     << ",\n\"ok\": " << (run.ok() ? "true" : "false") << ",\n\"errors\": " << json(run.errors).dump()
     << ",\n\"reports\": " << to_json(run.reports) << "}\n";
  return os.str();
}

VerifyResult cmd_verify(const RunConfig& cfg, const std::vector<std::string>& suites) {
  const std::vector<std::string> names = suites.empty() ? cfg.suites : suites;
  for (const auto& s : names) {
    if (!is_registered_suite(s)) throw ConfigError("unknown suite '" + s + "'");
  }
  SuiteContext ctx;
  ctx.seed = cfg.seed;
  ctx.samples = suite_samples(cfg.seed, cfg.sampling);
  ctx.tolerances = cfg.tolerances;
  ctx.rng_seed = cfg.rng_seed;

  VerifyResult out;
  out.run = run_suites(names, ctx);
  const auto dir = std::filesystem::path(cfg.out_dir);
  out.json_path = dir / (stem_of(cfg) + ".report.json");
  out.text_path = dir / (stem_of(cfg) + ".report.txt");
  write_text(out.json_path, verify_report_json(stem_of(cfg), names, out.run));
  std::string table = to_text_table(out.run.reports);
  for (const auto& e : out.run.errors) table += "error: " + e + "\n";
  table += out.run.ok() ? "verdict: pass\n" : "verdict: FAIL\n";
  write_text(out.text_path, table);
  return out;
}

std::vector<std::filesystem::path> cmd_export(const RunConfig& cfg,
                                              const std::optional<std::string>& slice_override,
                                              std::optional<int> sweep_override) {
  const ExportSpec& e = cfg.export_spec;
  const std::string slice_text = slice_override.value_or(e.slice);
  if (slice_text.empty()) throw ConfigError("export needs a slice such as \"x1,y1\"");
  if (e.counts.size() != 2) throw ConfigError("export counts must list two grid sizes");
  const int sweep = sweep_override.value_or(e.sweep);
  const std::string stem = e.prefix.empty() ? stem_of(cfg) : e.prefix;
  const auto dir = std::filesystem::path(cfg.out_dir);

  const ImmersionChart f = immersion_f(cfg.seed);
  const SliceSpec slice = parse_slice(slice_text, f.names(), f.box());
  if (sweep > 0) return export_sweep(cfg.seed, slice, e.counts[0], e.counts[1], sweep, dir, stem);

  if (e.surface == "f") return export_slice(f, slice, e.counts[0], e.counts[1], dir, stem);
  if (e.surface == "fbar") {
    return export_slice(conjugate_fbar(cfg.seed), slice, e.counts[0], e.counts[1], dir, stem + "_fbar");
  }
  if (e.surface == "theta") {
    return export_slice(associated(cfg.seed, e.theta), slice, e.counts[0], e.counts[1], dir,
                        stem + "_theta");
  }
  throw ConfigError("export surface must be f, fbar or theta, not '" + e.surface + "'");
}

}  // namespace kbend
