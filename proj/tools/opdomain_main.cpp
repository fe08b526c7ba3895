// opdomain: certify operator-domain hypotheses for infinite band matrices and
// first-order matrix differential operators from a JSON job config.

#include <CLI11.hpp>
#include <iostream>

#include "opdomain/pipeline.hpp"

namespace pl = opdomain::pipeline;

int main(int argc, char** argv) {
  CLI::App app{"operator-domain hypothesis checker"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a job config and write a report");
  std::string config_path, example_name, out_dir = "out";
  long seed = -1, max_window = -1;
  run->add_option("config", config_path, "path to a JSON job config");
  run->add_option("--example", example_name, "run a bundled example instead of a config file");
  run->add_option("--out", out_dir, "output directory for report.json and curve CSVs");
  run->add_option("--seed", seed, "override the RNG seed");
  run->add_option("--max-window", max_window, "cap the window ladder");

  auto* examples = app.add_subcommand("examples", "list the bundled example instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  if (examples->parsed()) {
    for (const auto& ex : pl::examples())
      std::cout << ex.name << "\n    " << ex.description << "\n";
    return 0;
  }

  try {
    if (config_path.empty() == example_name.empty()) {
      std::cerr << "error: give exactly one of <config.json> or --example NAME\n";
      return 3;
    }
    pl::JobConfig cfg = example_name.empty()
                            ? pl::JobConfig::from_file(config_path)
                            : pl::JobConfig::parse(pl::example_config(example_name));
    if (seed >= 0) {
      cfg.criteria.seed = static_cast<unsigned>(seed);
      cfg.raw["seed"] = seed;
    }
    if (max_window >= 0) {
      cfg.cap_windows(max_window);
      cfg.raw["max_window"] = max_window;
    }
    const auto result = pl::run_job(cfg);
    pl::write_outputs(result, out_dir);
    for (const auto& v : result.report.verdicts)
      std::cout << opdomain::report::to_string(v.outcome) << "  " << v.condition << "  "
                << v.detail << "\n";
    std::cout << result.report.conclusion << "\n";
    return result.exit_code;
  } catch (const pl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
