#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <pdmsusy/errors.hpp>

#include "pdmsusy/commands.hpp"
#include "pdmsusy/config.hpp"
#include "pdmsusy/verify.hpp"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericalError = 3 };

}  // namespace

int main(int argc, char** argv) {
  using namespace pdmsusy::app;

  CLI::App app{"Position-dependent-mass ladder systems and their SUSY partners"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("pdmsusy ") + PDMSUSY_VERSION);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  std::vector<std::string> overrides;

  for (const char* name : {"ladder", "solve", "susy", "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--set", overrides, "section.key=value override")->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = load_config(config_path, overrides);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (command == "ladder") {
      run_ladder(cfg, cfg.out_dir);
    } else if (command == "solve") {
      run_solve(cfg, cfg.out_dir);
    } else if (command == "susy") {
      run_susy(cfg, cfg.out_dir, jobs);
    } else {
      const auto report = run_verify(cfg);
      write_json(cfg.out_dir / "report.json", report.to_json());
      for (const auto& c : report.checks) {
        std::printf("%-36s %-4s residual=%.3e tolerance=%.3e%s%s\n", c.check.c_str(),
                    c.pass ? "PASS" : "FAIL", c.residual, c.tolerance,
                    c.detail.empty() ? "" : "  ", c.detail.c_str());
      }
      if (!report.passed()) return kVerifyFailed;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}
