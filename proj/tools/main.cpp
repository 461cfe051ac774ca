// collarext: run, check and list scenario configurations.

#include "collarext/config.hpp"
#include "collarext/errors.hpp"
#include "collarext/models.hpp"
#include "collarext/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace collarext;

namespace {

int cmd_run(const std::string& path) {
  const Config cfg = Config::load(path);
  const RunReport r = run_scenario(cfg);
  std::cout << "scenario: " << r.kind << "\n";
  for (const auto& v : r.verdicts) std::cout << (v.ok ? "ok   " : "FAIL ") << v.str() << "\n";
  for (const auto& f : r.csv_files) std::cout << "wrote " << f << "\n";
  std::cout << "report " << r.output_dir << "/report.txt (" << r.seconds << " s)\n";
  return exit_code(r);
}

int cmd_check(const std::string& path) {
  const Config cfg = Config::load(path);
  validate_scenario(cfg);
  std::cout << path << ": ok (" << cfg.get_string("scenario.kind") << ")\n";
  return 0;
}

int cmd_list() {
  for (const auto& e : models::catalog()) std::cout << e.id << "\t" << e.description << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collar extensions: curvature checks, completeness and growth obstructions"};
  app.require_subcommand(1);
  std::string run_path, check_path;
  auto* run = app.add_subcommand("run", "Run a scenario config and write its report");
  run->add_option("config", run_path, "Scenario config file")->required();
  auto* check = app.add_subcommand("check", "Validate a scenario config without running it");
  check->add_option("config", check_path, "Scenario config file")->required();
  auto* list = app.add_subcommand("list-models", "List model metrics and groups");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*run) return cmd_run(run_path);
    if (*check) return cmd_check(check_path);
    if (*list) return cmd_list();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
