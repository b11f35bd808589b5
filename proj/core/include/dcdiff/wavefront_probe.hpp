#pragma once

// Front bookkeeping for the mollified fundamental solution. Singularity order
// is read off from how the peak amplitude inside a tube of width w*h around a
// front scales with h across a dyadic family.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcdiff/propagator.hpp"

namespace dcdiff {

/// G = {|x - y| = t} and D = {r = t - r0} for a source at (0, 0, r0).
struct FrontGeometry {
  double r0 = 1.0;

  [[nodiscard]] double t0() const { return r0; }
  /// Positive radii where the ray at polar angle theta meets |x - y| = t, ascending.
  [[nodiscard]] std::vector<double> geometric_radii(double t, double theta) const;
  /// t - r0 once the incoming front has reached the origin.
  [[nodiscard]] std::optional<double> diffracted_radius(double t) const;
  /// The ray through the origin opposite the source, where G and D coincide.
  [[nodiscard]] static bool is_merged_ray(double theta);
};

enum class FrontKind { G, D };
[[nodiscard]] const char* front_name(FrontKind k);

struct FrontLocation {
  FrontKind kind;
  double theta;
  double expected;   ///< geometric radius
  double measured;   ///< radius of the largest local maximum near expected (NaN if absent)
  double amplitude;  ///< |u| at measured
  double tolerance;  ///< 5h + 2 local cells
  bool present;      ///< a local maximum above the noise floor lies within tolerance
  bool merged;       ///< D on the merged ray (reported, excluded from statistics)
};

struct FrontScan {
  double t;
  double noise_floor;
  std::vector<FrontLocation> fronts;
  /// Local maxima above the floor that no front accounts for, as (theta, r).
  std::vector<std::pair<double, double>> unexplained;
};

/// Local maxima of |u(t, ., theta)| along every probe ray matched against G and D.
/// The noise floor is max(10 * median |u|, rel_floor * max |u|) per ray, the
/// median taken over radii beyond the outer G crossing plus tolerance.
[[nodiscard]] FrontScan locate_fronts(const SpacetimeField& field, std::size_t time_index,
                                      double rel_floor = 1e-4);

/// Operators applied to the field before measuring the D amplitude.
enum class FieldOperator {
  identity,
  scaling_R,          ///< (t - r0) D_t + r D_r, tangent to D
  angular_laplacian,  ///< Delta_theta
  kappa_K,            ///< Dirac's K
  radial_derivative,  ///< D_r, transverse control
};
[[nodiscard]] const char* operator_name(FieldOperator op);

/// |op^applications u| at snapshot k on every (radius, probe angle) pair, laid
/// out radius-major. R and D_r use five-point stencils, so R needs snapshots
/// k +- 2*applications on a uniform time lattice.
[[nodiscard]] std::vector<double> operator_amplitude(const SpacetimeField& field, std::size_t k,
                                                     FieldOperator op, int applications = 1);

struct FrontFit {
  FrontKind kind;
  double theta;
  std::vector<double> h;
  std::vector<double> amplitude;
  std::vector<double> tube_lo;
  std::vector<double> tube_hi;
  double slope = 0.0;
  double slope_err = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< max |log2 A - fit|
  bool inconclusive = false;
};

struct ExponentGap {
  double theta;
  double delta_s;
  double delta_s_err;
  bool inconclusive;
};

struct FrontReport {
  double t;
  FieldOperator op = FieldOperator::identity;
  int applications = 1;
  std::vector<FrontFit> fits;
  std::vector<ExponentGap> gaps;
  [[nodiscard]] const FrontFit* find(FrontKind kind, double theta) const;
  [[nodiscard]] const ExponentGap* gap(double theta) const;
};

struct ProbeOptions {
  double tube_width = 6.0;  ///< in units of h
  double residual_limit = 0.15;
};

/// Fits log2 A against log2 h for G (outermost crossing) and D on every probe
/// ray; D is skipped on the merged ray. ArgumentError unless the family has at
/// least 4 members with h halving and identical physics and probe rays.
[[nodiscard]] FrontReport smoothing_exponent(std::span<const SpacetimeField> family, double t,
                                             const ProbeOptions& opt = {},
                                             FieldOperator op = FieldOperator::identity, int applications = 1);

struct ConormalResult {
  FieldOperator op;
  int applications;
  double theta;
  double s_D;
  double delta;  ///< s_D(op^n u) - s_D(u)
  bool inconclusive;
};

[[nodiscard]] std::vector<ConormalResult> conormal_test(std::span<const SpacetimeField> family, double t,
                                                        std::span<const FieldOperator> ops,
                                                        const ProbeOptions& opt = {}, int max_applications = 1);

/// Dyadic family with every grid scaled from its values at the largest h:
/// N_r and K_max grow like 1/h and dt shrinks like h.
struct FamilySpec {
  SimulationRequest base;        ///< source.h, grid, k_max, dt, times are overwritten
  std::vector<double> h_values;  ///< strictly decreasing by factor 2
  int n_r = 512;
  int k_max = 36;
  double dt = 0.00625;
  double r_max = 4.6;
  double grading = 2.0;
  double probe_time = 2.5;
  int stencil_steps = 2;  ///< time lattice spacing of the R stencil in units of dt
  int stencil_half = 4;   ///< snapshots at probe_time + j * stencil_steps * dt, |j| <= stencil_half
  bool leak_audit = false;
  std::vector<double> extra_times;  ///< further snapshots, merged with the stencil
};

void validate_family(const FamilySpec& spec);
[[nodiscard]] SimulationRequest member_request(const FamilySpec& spec, std::size_t member, int smoothing_power);
[[nodiscard]] std::vector<SpacetimeField> simulate_family(const FamilySpec& spec, int smoothing_power = 0);

struct NonfocusingEntry {
  int power;
  double tail_mass;   ///< initial mass with |kappa| = tail_kappa at the largest h
  double tail_ratio;  ///< tail_mass / tail_mass(power 0)
  double s_D;
  double s_D_err;
  bool inconclusive;
};

struct NonfocusingReport {
  int tail_kappa;
  double theta;
  std::vector<NonfocusingEntry> entries;
};

/// Runs the family once per smoothing power (power 0 is the unsmoothed
/// baseline) and compares the |kappa| = tail_kappa mass and the D exponent on
/// the probe ray theta. A precomputed baseline family can be passed to avoid
/// rerunning power 0.
[[nodiscard]] NonfocusingReport nonfocusing_probe(const FamilySpec& spec, std::span<const int> powers,
                                                  double theta, int tail_kappa = 16,
                                                  const std::vector<SpacetimeField>* baseline = nullptr,
                                                  const ProbeOptions& opt = {});

/// Same report from families already simulated, families[j] at powers[j].
[[nodiscard]] NonfocusingReport nonfocusing_report(const FamilySpec& spec, std::span<const int> powers,
                                                   std::span<const std::vector<SpacetimeField>> families,
                                                   double theta, int tail_kappa = 16, const ProbeOptions& opt = {});

}  // namespace dcdiff
