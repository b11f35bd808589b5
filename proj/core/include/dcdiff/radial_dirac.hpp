#pragma once

// Per-channel radial Dirac operator on a staggered graded grid. With F = r f on
// integer nodes and G = r g on half nodes the channel system reads
//
//   E F = (A0 + m) F - G' + (kappa/r) G
//   E G =  F' + (kappa/r) F + (A0 - m) G
//
// and the flat dr inner product makes the discrete operator a real symmetric
// tridiagonal matrix once both fields are scaled by the square roots of their
// cell widths and interleaved as (G_1/2, F_1, G_3/2, ..., F_N-1, G_N-1/2).

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dcdiff/angular_channels.hpp"
#include "dcdiff/physical_params.hpp"
#include "dcdiff/radial_grid.hpp"

namespace dcdiff {

/// Radial profiles of one channel: the spinor (f Omega_{kappa mu}; i g Omega_{-kappa mu})
/// with F = r f, G = r g. F has N+1 entries (F_0 = F_N = 0), G has N entries.
struct RadialChannelState {
  ChannelIndex channel{-1, 1};
  std::vector<cplx> F;
  std::vector<cplx> G;

  static RadialChannelState zero(const ChannelIndex& ch, const RadialGrid& grid);
  /// int (|F|^2 + |G|^2) dr with the staggered cell widths.
  [[nodiscard]] double norm_squared(const RadialGrid& grid) const;
};

class RadialHamiltonian {
 public:
  RadialHamiltonian(int kappa, PhysicalParams params, std::shared_ptr<const RadialGrid> grid);

  [[nodiscard]] int kappa() const { return kappa_; }
  [[nodiscard]] const PhysicalParams& params() const { return params_; }
  [[nodiscard]] const RadialGrid& grid() const { return *grid_; }
  [[nodiscard]] std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
  [[nodiscard]] std::size_t dimension() const { return diag_.size(); }
  [[nodiscard]] const std::vector<double>& diagonal() const { return diag_; }
  [[nodiscard]] const std::vector<double>& off_diagonal() const { return off_; }
  /// Gershgorin bound on the spectral radius.
  [[nodiscard]] double norm_bound() const;
  /// Non-fatal resolution diagnostics collected during assembly.
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

  /// y = H x on scaled, interleaved vectors.
  void apply(std::span<const cplx> x, std::span<cplx> y) const;

  /// Scaled interleaved vector of a state and back.
  [[nodiscard]] std::vector<cplx> pack(const RadialChannelState& s) const;
  [[nodiscard]] RadialChannelState unpack(std::span<const cplx> x, const ChannelIndex& ch) const;

 private:
  int kappa_;
  PhysicalParams params_;
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<double> diag_;
  std::vector<double> off_;
  std::vector<double> scale_;  // sqrt of cell widths in interleaved order
  std::vector<std::string> warnings_;
};

/// Refuses |Z| >= sqrt(3)/2 with DomainError.
[[nodiscard]] RadialHamiltonian build_hamiltonian(const ChannelIndex& ch, const PhysicalParams& params,
                                                  std::shared_ptr<const RadialGrid> grid);

/// Crank-Nicolson propagator (I + i dt/2 H)^{-1} (I - i dt/2 H) with a
/// pre-factorized tridiagonal left-hand side.
class CrankNicolson {
 public:
  CrankNicolson(const RadialHamiltonian& h, double dt);

  [[nodiscard]] double dt() const { return dt_; }
  /// One step in place on a scaled interleaved vector.
  void step(std::span<cplx> x) const;
  void step(std::span<cplx> x, std::span<cplx> scratch) const;
  /// Steps two systems of equal dimension in lockstep. Bitwise identical to two
  /// separate steps; interleaving hides the latency of the serial sweeps.
  static void step_pair(const CrankNicolson& a, std::span<cplx> xa, std::span<cplx> sa, const CrankNicolson& b,
                        std::span<cplx> xb, std::span<cplx> sb);

 private:
  const RadialHamiltonian* h_;
  double dt_;
  double half_dt_;
  std::vector<cplx> lower_;    // l_k
  std::vector<cplx> inv_piv_;  // 1 / u_k
  std::vector<cplx> upper_;    // eps_k / u_k
};

[[nodiscard]] RadialChannelState evolve_cn(const RadialChannelState& state, const RadialHamiltonian& h,
                                           double dt, int n_steps);

/// Full eigendecomposition of a radial Hamiltonian (dense, LAPACK dstevr).
class SpectralEvolver {
 public:
  /// ArgumentError for dimension above 8192.
  explicit SpectralEvolver(const RadialHamiltonian& h);

  [[nodiscard]] const std::vector<double>& eigenvalues() const { return values_; }
  [[nodiscard]] std::vector<cplx> evolve(std::span<const cplx> x, double t) const;

 private:
  const RadialHamiltonian* h_;
  std::size_t n_;
  std::vector<double> values_;
  std::vector<double> vectors_;  // column-major n x n
};

[[nodiscard]] RadialChannelState evolve_exact(const RadialChannelState& state, const RadialHamiltonian& h,
                                              double t);

/// Eigenvalues in (-m, m), ascending. Empty for m == 0.
[[nodiscard]] std::vector<double> bound_states(const ChannelIndex& ch, const PhysicalParams& params,
                                               std::shared_ptr<const RadialGrid> grid);

/// Eigenpair of H closest to target (scaled interleaved eigenvector, unit norm).
struct Eigenpair {
  double value;
  std::vector<double> vector;
};
[[nodiscard]] Eigenpair eigenpair_near(const RadialHamiltonian& h, double target);

struct BoundStateEstimate {
  std::vector<int> n_levels;   ///< grid sizes used (n0, 2 n0, 4 n0, ...)
  std::vector<double> values;  ///< eigenvalue at each level
  double extrapolated;         ///< Richardson estimate using the observed order
  double observed_order;       ///< log2 of the ratio of successive differences
};

/// Follows one gap eigenvalue across grids N, 2N, 4N, ... and extrapolates.
/// Gap states are ranked by binding energy m - |E|, most bound first;
/// excitation selects the rank.
[[nodiscard]] BoundStateEstimate extrapolate_bound_state(const ChannelIndex& ch, const PhysicalParams& params,
                                                         int n0, double r_max, double grading,
                                                         int excitation = 0, int levels = 3);

}  // namespace dcdiff
