#pragma once

// Boundary spectrum of r*B at the Coulomb singularity, the resulting
// self-adjointness classification, and a quadrature check of the 3D Hardy
// inequality ||u/r|| <= 2 ||d_r u||.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "dcdiff/physical_params.hpp"
#include "dcdiff/radial_grid.hpp"

namespace dcdiff {

/// |Z| below this value keeps Im spec_b(rB) out of [1/2, 3/2].
inline constexpr double kSelfAdjointThreshold = 0.86602540378443864676;  // sqrt(3)/2

struct IndicialRoot {
  int kappa;
  std::complex<double> sigma_plus;   ///< i + i sqrt(kappa^2 - Z^2)
  std::complex<double> sigma_minus;  ///< i - i sqrt(kappa^2 - Z^2)
  bool imaginary;                    ///< |Z| <= |kappa|
  bool in_window;                    ///< Im sigma_+ or Im sigma_- in [1/2, 3/2]
};

struct IndicialRootSet {
  double Z = 0.0;
  std::vector<IndicialRoot> roots;       ///< kappa = -kappa_max..-1, 1..kappa_max
  std::vector<double> sorted_imag_parts;  ///< all Im sigma, ascending
};

/// Closed-form roots sigma = i +- i sqrt(kappa^2 - Z^2) for 1 <= |kappa| <= kappa_max.
[[nodiscard]] IndicialRootSet boundary_spectrum(double Z, int kappa_max);

/// Im sigma lies in the closed window [1/2, 3/2] (endpoint matched to 1e-12).
[[nodiscard]] bool in_critical_window(double im_sigma);

enum class SelfAdjointness { essentially_selfadjoint, extension_needed };

struct SelfAdjointnessReport {
  SelfAdjointness verdict;
  std::vector<IndicialRoot> witnesses;  ///< roots falling into the window
};

/// Scans kappa = +-1 (the binding case) plus a sanity sweep up to kappa_max.
[[nodiscard]] SelfAdjointnessReport selfadjointness_check(double Z, int kappa_max = 8);

/// Throws DomainError when |Z| is outside the essentially self-adjoint range.
void require_selfadjoint(double Z);

struct HardyResult {
  double lhs;  ///< ||u / r|| in L^2(r^2 dr d theta)
  double rhs;  ///< 2 ||d_r u||
  bool holds;
};

/// u sampled at the integer nodes r_0 = 0, ..., r_N of grid (N even) and
/// vanishing at r_max. Composite Simpson in the uniform index variable. Throws
/// PrecisionError when halving the resolution moves either norm by more than
/// 1e-4 relative.
[[nodiscard]] HardyResult hardy_check(std::span<const double> u, const RadialGrid& grid);

}  // namespace dcdiff
