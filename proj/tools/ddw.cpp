// ddw: run a configured experiment and write its CSV table.
//
//   ddw run.cfg [--experiment NAME] [--out PATH] [--threads N]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ddw/config.hpp"
#include "ddw/experiments.hpp"
#include "ddw/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Floquet and dissipative dynamics of a driven double well"};
  std::string config_path;
  std::string experiment;
  std::string out;
  int threads = -1;
  app.add_option("config", config_path, "flat key = value configuration file")->required();
  app.add_option("--experiment", experiment, "spectrum, dynamics, decoherence or asymptotic");
  app.add_option("--out", out, "output CSV path");
  app.add_option("--threads", threads, "worker threads (0 = all available)")
      ->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  ddw::config::RunConfig config;
  try {
    config = ddw::config::load_config(config_path);
    if (!experiment.empty()) ddw::config::assign(config, "experiment", experiment);
    if (!out.empty()) ddw::config::assign(config, "output", out);
    if (threads >= 0) config.threads = threads == 0 ? ddw::default_thread_count() : threads;
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "ddw: " << e.what() << '\n';
    return 2;
  }
  return ddw::experiments::run(config, std::cerr);
}
