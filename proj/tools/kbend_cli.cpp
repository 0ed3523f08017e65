#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "kbend/commands.hpp"
#include "kbend/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Minimal Kaehler hypersurfaces: construction, verification and export"};
  app.require_subcommand(0, 1);
  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults, "Print the embedded default config and exit");

  std::string config_path;
  auto* gen = app.add_subcommand("generate", "Write the chart bundle for a seed");
  gen->add_option("--config", config_path, "JSON config")->required();

  std::vector<std::string> suites;
  auto* ver = app.add_subcommand("verify", "Run verification suites and write reports");
  ver->add_option("--config", config_path, "JSON config")->required();
  ver->add_option("--suite", suites, "Suite to run (repeatable; default: the config's list)");

  std::string slice;
  int sweep = -1;
  auto* exp = app.add_subcommand("export", "Write OBJ and CSV for a two-dimensional slice");
  exp->add_option("--config", config_path, "JSON config")->required();
  exp->add_option("--slice", slice, "Free coordinates and fixed values, e.g. \"x1,y1:x2=0.1\"");
  exp->add_option("--sweep", sweep, "Number of associated-family frames over [0, pi)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_defaults) {
      std::cout << kbend::dump_json(kbend::default_config_json()) << "\n";
      return 0;
    }
    if (app.got_subcommand(gen)) {
      std::cout << kbend::cmd_generate(kbend::load_config(config_path)).string() << "\n";
      return 0;
    }
    if (app.got_subcommand(ver)) {
      const auto result = kbend::cmd_verify(kbend::load_config(config_path), suites);
      std::cout << kbend::to_text_table(result.run.reports);
      for (const auto& e : result.run.errors) std::cerr << "error: " << e << "\n";
      std::cout << "report: " << result.json_path.string() << "\n";
      return result.exit_code();
    }
    if (app.got_subcommand(exp)) {
      const auto files = kbend::cmd_export(kbend::load_config(config_path),
                                           slice.empty() ? std::nullopt : std::optional(slice),
                                           sweep >= 0 ? std::optional(sweep) : std::nullopt);
      for (const auto& f : files) std::cout << f.string() << "\n";
      return 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "kbend: " << e.what() << "\n";
    return 2;
  }
}
