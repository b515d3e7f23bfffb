// lagns: run, verify and sweep Lagrangian Navier-Stokes simulations.
//
//   lagns run   [config.json|-] [--set key=value ...]
//   lagns mms   [config.json|-] [--set key=value ...]
//   lagns sweep [config.json|-] --param KEY --values V1,V2,... [--jobs N]

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lagns/app.hpp"

namespace {

std::string read_config(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw lagns::ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian compressible Navier-Stokes solver with estimate audits"};
  app.footer(std::string("\nOutput root defaults to $") + lagns::kOutputRootEnv +
             " (or ./lagns_out) when output_dir is not set.\n\n" + lagns::config_reference() +
             "\nExit codes: 0 ok, 1 config error, 2 integration failure, 3 truncation breach,"
             " 4 MMS order below threshold.");
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON config file, '-' or omitted for stdin");
    sub->add_option("--set", overrides, "Override a config key, e.g. --set gas.mu=2 (repeatable)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run one simulation and write the audit files");
  add_common(run_cmd);
  CLI::App* mms_cmd = app.add_subcommand("mms", "Manufactured-solution convergence study");
  add_common(mms_cmd);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a config over a list of values of one key");
  add_common(sweep_cmd);
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  sweep_cmd->add_option("--param", sweep_key, "Dotted config key to vary")->required();
  sweep_cmd->add_option("--values", sweep_values, "Values to assign")->required()->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string text = read_config(config_path);
    if (run_cmd->parsed()) {
      return lagns::run(lagns::parse_config(text, overrides), std::cout).exit_code;
    }
    if (mms_cmd->parsed()) {
      return lagns::run_mms(lagns::parse_config(text, overrides), std::cout).exit_code;
    }
    return lagns::sweep(text, overrides, sweep_key, sweep_values, jobs, std::cout);
  } catch (const lagns::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lagns::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lagns::kExitConfig;
  }
}
