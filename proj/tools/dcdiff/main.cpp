#include <iostream>

#include <CLI11.hpp>

#include "dcdiff/cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dirac-Coulomb propagator: indicial roots, bound states, mollified fundamental solution, front probes"};
  app.require_subcommand(1, 1);
  dcdiff::cli::RunOptions opt;
  std::string config;
  std::string out;
  int threads = 0;
  for (const char* name : {"indicial", "spectrum", "simulate", "probe", "all"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "worker threads (default: DCDIFF_THREADS, else 1)")
        ->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(dcdiff::cli::ExitCode::usage);
  }
  opt.subcommand = app.get_subcommands().front()->get_name();
  opt.config = config;
  opt.out = out;
  opt.threads = threads;
  return static_cast<int>(dcdiff::cli::run(opt, std::cout, std::cerr));
}
