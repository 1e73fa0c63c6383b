#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <thread>

#include "qss/cli/config.hpp"
#include "qss/cli/report.hpp"
#include "qss/cli/sweep.hpp"
#include "qss/cli/validate.hpp"
#include "qss/errors.hpp"

using namespace qss::cli;

namespace {

int cmd_run(const std::string& path) {
  const auto cfg = run_config_from(KeyValueFile::load(path));
  const auto report = run_report(cfg, tolerance_override_from_env());
  std::cout << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path, std::size_t workers) {
  const auto spec = sweep_spec_from(KeyValueFile::load(spec_path));
  const double slack = tolerance_override_from_env().value_or(1e-12);
  const auto table = run_sweep(spec, workers, slack);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return kExitConfig;
  }
  write_csv(table, out);
  for (const auto& m : table.messages) {
    std::cerr << "warning: " << m << '\n';
  }
  if (table.warnings > table.messages.size()) {
    std::cerr << "warning: " << table.warnings - table.messages.size() << " more\n";
  }
  return kExitOk;
}

int cmd_validate(const std::string& grid) {
  const auto rows = run_validation(grid == "fine" ? GridSize::Fine : GridSize::Coarse);
  print_validation(rows, std::cout);
  const bool ok = all_passed(rows);
  std::cout << (ok ? "all formulas within tolerance" : "validation FAILED") << '\n';
  return ok ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential quantum secret sharing simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the protocol for one config, JSON report on stdout");
  run->add_option("--config", config_path, "key = value config file")->required();

  std::string spec_path, out_path;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Evaluate a quantity over a parameter grid, write CSV");
  sweep->add_option("--spec", spec_path, "key = value sweep spec")->required();
  sweep->add_option("--out", out_path, "output CSV path")->required();
  sweep->add_option("--workers", workers, "worker threads")->check(CLI::Range(1, 256));

  std::string grid = "coarse";
  auto* validate = app.add_subcommand("validate", "Check closed forms against the simulator");
  validate->add_option("--grid", grid, "coarse or fine")->check(CLI::IsMember({"coarse", "fine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*run) {
      return cmd_run(config_path);
    }
    if (*sweep) {
      return cmd_sweep(spec_path, out_path, workers);
    }
    return cmd_validate(grid);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const qss::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidationFailed;
  }
}
