#pragma once

// Mollified fundamental solution: a Gaussian point source on the polar axis is
// split into (kappa, mu) channels, every channel is evolved with Crank-Nicolson,
// and the spinor field is rebuilt along a few probe rays.

#include <memory>
#include <optional>
#include <vector>

#include "dcdiff/angular_channels.hpp"
#include "dcdiff/physical_params.hpp"
#include "dcdiff/radial_dirac.hpp"
#include "dcdiff/radial_grid.hpp"

namespace dcdiff {

/// Source psi0 * (2 pi h^2)^{-3/2} exp(-|x - y|^2 / (2 h^2)) with y = (0, 0, r0).
struct SourceSpec {
  double r0 = 1.0;
  Spinor4 psi0 = Spinor4(1.0, 0.0, 0.0, 0.0);
  double h = 0.1;

  /// ArgumentError unless r0 > 3h, h > 0 and |psi0| = 1 (1e-12).
  void validate() const;
  [[nodiscard]] double amplitude(double r, double cos_theta) const;
};

using ChannelStates = std::vector<RadialChannelState>;

/// Channel profiles of the mollified source on grid, truncated to |kappa| <= k_max.
/// The Gaussian is sampled only for |r - r0| <= 8h. PrecisionError if the grid
/// spacing at r0 exceeds h/8; ConfigurationError if k_max < 1.
[[nodiscard]] ChannelStates build_initial_data(const SourceSpec& src, const RadialGrid& grid, int k_max);

/// Applies (1 + Delta_theta)^{-n} channel by channel (n >= 0).
[[nodiscard]] ChannelStates smooth_angular(const ChannelStates& states, int n);

/// Sum of channel norms.
[[nodiscard]] double total_norm_squared(const ChannelStates& states, const RadialGrid& grid);
/// Mass carried by channels with |kappa| == k.
[[nodiscard]] double shell_mass(const ChannelStates& states, const RadialGrid& grid, int k);

/// Angular operators whose images are rebuilt alongside the field.
enum class AngularImage { field = 0, laplacian = 1, laplacian2 = 2, kappa_op = 3, kappa_op2 = 4 };
inline constexpr int kAngularImages = 5;

struct SimulationRequest {
  SourceSpec source;
  PhysicalParams params;
  std::shared_ptr<const RadialGrid> grid;
  int k_max = 16;
  double dt = 1e-3;
  std::vector<double> times;         ///< snapshot times, rounded to multiples of dt
  std::vector<double> probe_angles;  ///< polar angles (radians) from the source axis
  int smoothing_power = 0;           ///< N in (1 + Delta_theta)^{-N} applied to the data
  bool keep_channels = false;        ///< store channel states at every snapshot
  std::vector<double> diagnostic_times;  ///< snapshots that also get a quadrature mass audit
  unsigned threads = 1;
};

/// Mass bookkeeping from a full angular quadrature of the rebuilt field.
struct MassDiagnostics {
  double total = 0.0;
  double outside_cone = 0.0;  ///< mass with |x - y| > t + 5h
};

class SpacetimeField {
 public:
  SourceSpec source;
  PhysicalParams params;
  std::shared_ptr<const RadialGrid> grid;
  int k_max = 0;
  double dt = 0.0;
  int smoothing_power = 0;
  std::vector<double> times;
  std::vector<int> steps;
  std::vector<double> angles;
  std::vector<double> radii;          ///< interior integer nodes r_1..r_{N-1}
  std::vector<double> norms;          ///< channel-space L^2 norm squared per snapshot
  std::vector<std::optional<MassDiagnostics>> mass;  ///< per snapshot, set where requested
  std::vector<ChannelStates> channels;

  void allocate();
  [[nodiscard]] std::size_t index(std::size_t k, std::size_t i, std::size_t q) const {
    return (k * radii.size() + i) * angles.size() + q;
  }
  [[nodiscard]] const Spinor4& at(std::size_t k, std::size_t i, std::size_t q,
                                  AngularImage img = AngularImage::field) const {
    return images_[static_cast<std::size_t>(img)][index(k, i, q)];
  }
  Spinor4& at(std::size_t k, std::size_t i, std::size_t q, AngularImage img = AngularImage::field) {
    return images_[static_cast<std::size_t>(img)][index(k, i, q)];
  }
  [[nodiscard]] const std::vector<Spinor4>& image(AngularImage img) const {
    return images_[static_cast<std::size_t>(img)];
  }
  std::vector<Spinor4>& image(AngularImage img) { return images_[static_cast<std::size_t>(img)]; }

  /// Snapshot index whose time is within dt/2 of t.
  [[nodiscard]] std::optional<std::size_t> find_time(double t) const;

 private:
  std::vector<Spinor4> images_[kAngularImages];
};

/// Evolves every channel of the (optionally smoothed) source and samples the
/// field on the probe rays. Channels are committed in index order, so the
/// result does not depend on the thread count.
[[nodiscard]] SpacetimeField fundamental_solution(const SimulationRequest& req);

/// Box [t - delta, t + delta] x [r_lo, r_hi] for the residual test.
struct ResidualRegion {
  std::size_t time_index;  ///< centre snapshot; neighbours must be equally spaced
  double r_lo;
  double r_hi;
};

/// ||P u|| / ||u|| over the region, P the second-order operator obtained by
/// squaring the channel Dirac system (centred differences in t and r, exact in
/// angle). Requires keep_channels. ArgumentError if the box touches r = 0, the
/// outer wall, or the first or last snapshot.
[[nodiscard]] double klein_gordon_residual(const SpacetimeField& field, const ResidualRegion& region);

}  // namespace dcdiff
