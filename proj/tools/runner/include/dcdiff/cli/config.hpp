#pragma once

// Scenario configuration: one JSON document per scenario. Grid sizes are given
// for the largest h and scaled across the family.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcdiff/wavefront_probe.hpp"

namespace dcdiff::cli {

/// Malformed or inconsistent configuration; the message names the field.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectrumConfig {
  std::vector<int> kappas{-1, 1, -2};
  int states = 1;  ///< gap states per kappa, most bound first
  int n0 = 512;
  double r_max = 80.0;
  double grading = 2.0;
  int levels = 3;
};

struct ProbeConfig {
  double time = 0.0;  ///< defaults to the last snapshot time
  int stencil_steps = 2;
  double tube_width = 6.0;
  double residual_limit = 0.15;
  int max_applications = 1;
  std::vector<int> smoothing_powers;  ///< extra families for the nonfocusing probe
  int tail_kappa = 16;
  double nonfocusing_theta_deg = 90.0;
  bool leak_audit = true;
};

struct ScenarioConfig {
  double Z = 0.0;
  double m = 0.0;
  std::vector<double> V;  ///< polynomial coefficients, empty for V = 0
  double r0 = 1.0;
  Spinor4 psi0 = Spinor4(1.0, 0.0, 0.0, 0.0);
  std::vector<double> h;
  int k_max = 36;
  int n_r = 512;
  double grading = 2.0;
  double r_max = 4.6;
  double dt = 0.00625;
  std::vector<double> snapshot_times;
  std::vector<double> probe_directions_deg;
  std::filesystem::path output_dir = "dcdiff_out";
  int indicial_kappa_max = 8;
  SpectrumConfig spectrum;
  ProbeConfig probe;
  nlohmann::json source;  ///< the document as read, echoed into the manifest

  [[nodiscard]] PhysicalParams physical_params() const;
  /// Family layout for the given smoothing power; probe.time sits at the
  /// centre of the R stencil.
  [[nodiscard]] FamilySpec family() const;
};

/// Parses and validates. Physics checks that need the classifier (|Z| range)
/// are left to the runner so that `indicial` still accepts large Z.
[[nodiscard]] ScenarioConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace dcdiff::cli
