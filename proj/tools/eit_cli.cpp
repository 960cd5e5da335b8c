// Command-line front end: parameter sweeps over (omega, z, theta, beam),
// analytic-vs-numeric comparison reports, and length-scale summaries.
//
// Exit codes: 0 success, 1 comparison tolerance exceeded, 2 configuration or
// usage error, 3 numerical failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eit/eit.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> settings;
  std::string out_path;
  std::string mode;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "flat key=value config file");
  cmd->add_option("--set", opts.settings, "override one config key (key=value, repeatable)");
  cmd->add_option("--out", opts.out_path, "output path (default: standard output)");
  cmd->add_option("--mode", opts.mode, "analytic|numeric|compare|decoherence");
}

eit::SweepConfig assemble(const CommonOptions& opts) {
  eit::SweepConfig config;
  if (!opts.config_path.empty()) eit::load_config_file(config, opts.config_path);
  for (const auto& setting : opts.settings) eit::apply_assignment(config, setting);
  if (!opts.out_path.empty()) config.out = opts.out_path;
  if (!opts.mode.empty()) config.mode = eit::parse_mode(opts.mode);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pump/probe quadrature-noise propagation through a lambda-type EIT medium"};
  app.require_subcommand(1);

  CommonOptions sweep_opts, compare_opts, scales_opts;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "write spectra over the (omega, z) grid");
  add_common(sweep_cmd, sweep_opts);
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "summarize analytic-vs-numeric deviations over the grid");
  add_common(compare_cmd, compare_opts);
  CLI::App* scales_cmd =
      app.add_subcommand("scales", "print length scales and response peaks for one frequency");
  add_common(scales_cmd, scales_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (sweep_cmd->parsed()) {
      return eit::run_sweep(assemble(sweep_opts), std::cout);
    }
    if (compare_cmd->parsed()) {
      eit::SweepConfig config = assemble(compare_opts);
      std::string table;
      const eit::CompareReport report =
          eit::compare_report(config, config.out.empty() ? nullptr : &table);
      if (!config.out.empty()) {
        std::ofstream file(config.out, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output file '" + config.out + "'");
        file << table;
        if (!file) throw std::runtime_error("failed writing output file '" + config.out + "'");
      }
      std::cout << eit::format_report(report);
      return report.pass ? 0 : 1;
    }
    if (scales_cmd->parsed()) {
      const eit::SweepConfig config = assemble(scales_opts);
      const std::string report = eit::scales_report(config);
      if (!config.out.empty()) {
        std::ofstream file(config.out, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output file '" + config.out + "'");
        file << report;
      } else {
        std::cout << report;
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
