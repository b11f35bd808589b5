#pragma once

// DCWF1 snapshot files. Layout: the 5 bytes "DCWF1", u32 n_t, n_r,
// n_theta_nodes, K_max, f64 Z, m, h, r0, then little-endian f64 (Re, Im)
// pairs of the four spinor components, t-major, then r, angle-minor.
// Times, radii and angles go into a companion "<stem>.grid.csv".

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dcdiff/propagator.hpp"

namespace dcdiff::cli {

struct SnapshotHeader {
  std::uint32_t n_t = 0;
  std::uint32_t n_r = 0;
  std::uint32_t n_theta = 0;
  std::uint32_t k_max = 0;
  double Z = 0.0;
  double m = 0.0;
  double h = 0.0;
  double r0 = 0.0;
};

struct SnapshotFile {
  SnapshotHeader header;
  std::vector<Spinor4> data;
};

void write_dcwf(const std::filesystem::path& path, const SnapshotHeader& header, std::span<const Spinor4> data);
/// DependencyError if the file is missing, std::runtime_error if it is malformed.
[[nodiscard]] SnapshotFile read_dcwf(const std::filesystem::path& path);

struct SnapshotGrid {
  std::vector<double> times;
  std::vector<double> radii;
  std::vector<double> angles;  ///< radians
};

void write_snapshot_grid(const std::filesystem::path& path, const SnapshotGrid& grid);
[[nodiscard]] SnapshotGrid read_snapshot_grid(const std::filesystem::path& path);

/// File suffix of each stored angular image ("" for the field itself).
[[nodiscard]] std::string image_suffix(AngularImage img);

/// Writes every angular image of field as "<stem><suffix>.dcwf" plus the grid
/// file. Returns the paths written.
std::vector<std::filesystem::path> write_field(const std::filesystem::path& dir, const std::string& stem,
                                               const SpacetimeField& field);

/// Rebuilds a field from disk. req supplies what the files do not carry (grid,
/// dt, potential); a header that disagrees with req is a DependencyError.
[[nodiscard]] SpacetimeField read_field(const std::filesystem::path& dir, const std::string& stem,
                                        const SimulationRequest& req);

}  // namespace dcdiff::cli
