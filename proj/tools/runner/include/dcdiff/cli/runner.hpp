#pragma once

// Pipeline stages behind the dcdiff command line. Each stage reads the
// configuration, writes its artifacts under the output directory and returns;
// `probe` reads what `simulate` left on disk.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dcdiff/cli/config.hpp"
#include "dcdiff/indicial_analysis.hpp"

namespace dcdiff::cli {

enum class ExitCode : int {
  ok = 0,
  failure = 1,
  usage = 2,
  extension_needed = 3,
  refused = 4,
  dependency = 5,
};

struct RunOptions {
  std::string subcommand;  ///< indicial, spectrum, simulate, probe or all
  std::filesystem::path config;
  std::filesystem::path out;  ///< empty: output_dir from the config
  int threads = 0;            ///< 0: DCDIFF_THREADS, else 1
};

/// Runs a subcommand, writes the manifest and maps failures to exit codes.
/// Progress goes to log, diagnostics to err.
[[nodiscard]] ExitCode run(const RunOptions& opt, std::ostream& log, std::ostream& err);

// Individual stages, for tests and embedding. They throw on error.
[[nodiscard]] SelfAdjointness run_indicial(const ScenarioConfig& cfg, const std::filesystem::path& out,
                                           std::ostream& log);
void run_spectrum(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);
void run_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out, unsigned threads, std::ostream& log);
void run_probe(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Stem of the snapshot files for smoothing power n and family member j.
[[nodiscard]] std::string family_stem(int power, std::size_t member);

}  // namespace dcdiff::cli
