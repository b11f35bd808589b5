#pragma once

// Spinor spherical harmonics Omega_{kappa mu}, channel projection of sampled
// 4-spinor fields, and the diagonal action of K and the angular Laplacian.

#include <compare>
#include <map>
#include <span>
#include <vector>

#include "dcdiff/spinor_algebra.hpp"

namespace dcdiff {

/// Angular channel (kappa, mu). mu is stored doubled so that it stays integral.
class ChannelIndex {
 public:
  /// Throws ArgumentError unless kappa != 0, two_mu odd and |mu| <= |kappa| - 1/2.
  ChannelIndex(int kappa, int two_mu);

  [[nodiscard]] int kappa() const { return kappa_; }
  [[nodiscard]] int two_mu() const { return two_mu_; }
  [[nodiscard]] double mu() const { return 0.5 * two_mu_; }
  /// Orbital degree l = |kappa + 1/2| - 1/2 of the upper spinor.
  [[nodiscard]] int l() const { return orbital_degree(kappa_); }
  /// Degree of the lower spinor, which carries Omega_{-kappa mu}.
  [[nodiscard]] int l_lower() const { return orbital_degree(-kappa_); }
  [[nodiscard]] ChannelIndex flipped() const { return {-kappa_, two_mu_}; }

  static int orbital_degree(int kappa) { return kappa > 0 ? kappa : -kappa - 1; }
  static bool is_valid(int kappa, int two_mu);

  auto operator<=>(const ChannelIndex&) const = default;

 private:
  int kappa_;
  int two_mu_;
};

/// All channels with 1 <= |kappa| <= k_max, sorted. With axis_only only mu = +-1/2.
[[nodiscard]] std::vector<ChannelIndex> enumerate_channels(int k_max, bool axis_only = false);

/// Orthonormal spherical harmonic Y_lm with Condon-Shortley phase; zero if |m| > l.
[[nodiscard]] cplx spherical_harmonic(int l, int m, double theta, double phi);

/// Normalized associated Legendre values Ybar_l^m(x) for l = |m|..l_max, such that
/// Y_lm(theta, phi) = Ybar_l^m(cos theta) e^{i m phi}. Entry k holds l = |m| + k.
[[nodiscard]] std::vector<double> normalized_legendre(int m, int l_max, double x);

/// Real prefactors of Omega: upper entry multiplies Y_{l, mu-1/2}, lower Y_{l, mu+1/2}.
struct SpinorHarmonicCoefficients {
  double upper;
  double lower;
};
[[nodiscard]] SpinorHarmonicCoefficients spinor_harmonic_coefficients(const ChannelIndex& ch);

/// Two-component spinor spherical harmonic Omega_{kappa mu}(dir).
[[nodiscard]] Spinor2 spherical_spinor(const ChannelIndex& ch, const Direction& dir);
[[nodiscard]] Spinor2 spherical_spinor(const ChannelIndex& ch, double theta, double phi);

/// Gauss-Legendre in cos(theta) times a uniform azimuthal grid. Exact for products
/// Y_lm conj(Y_l'm') with l + l' <= 2 l_max.
class AngularGrid {
 public:
  explicit AngularGrid(int l_max);

  [[nodiscard]] int l_max() const { return l_max_; }
  [[nodiscard]] int n_theta() const { return static_cast<int>(cos_theta_.size()); }
  [[nodiscard]] int n_phi() const { return n_phi_; }
  [[nodiscard]] std::size_t size() const { return cos_theta_.size() * static_cast<std::size_t>(n_phi_); }

  [[nodiscard]] double cos_theta(int i) const { return cos_theta_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] double theta(int i) const;
  [[nodiscard]] double phi(int j) const;
  /// Weight of node (i, j) in steradian.
  [[nodiscard]] double weight(int i) const { return weight_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] double gauss_weight(int i) const { return gauss_weight_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::size_t node(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_phi_) + static_cast<std::size_t>(j);
  }
  [[nodiscard]] Direction direction(int i, int j) const;

 private:
  int l_max_;
  int n_phi_;
  std::vector<double> cos_theta_;
  std::vector<double> gauss_weight_;
  std::vector<double> weight_;
};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Coefficients of (Omega_{kappa mu}; 0) and (0; Omega_{-kappa mu}) per channel.
/// Each profile holds one value per radius (a single radius for angular-only use).
struct ChannelPair {
  std::vector<cplx> a;
  std::vector<cplx> b;
};

class ChannelCoefficients {
 public:
  ChannelCoefficients() = default;
  explicit ChannelCoefficients(std::size_t n_radii) : n_radii_(n_radii) {}

  [[nodiscard]] std::size_t n_radii() const { return n_radii_; }
  [[nodiscard]] const std::map<ChannelIndex, ChannelPair>& channels() const { return channels_; }
  std::map<ChannelIndex, ChannelPair>& channels() { return channels_; }

  /// Inserts a zero profile if absent.
  ChannelPair& at(const ChannelIndex& ch);
  [[nodiscard]] const ChannelPair* find(const ChannelIndex& ch) const;

  /// Largest |kappa| present.
  [[nodiscard]] int k_max() const;
  /// sum over channels of |a|^2 + |b|^2 at radius index ir.
  [[nodiscard]] double squared_norm(std::size_t ir = 0) const;

 private:
  std::size_t n_radii_ = 1;
  std::map<ChannelIndex, ChannelPair> channels_;
};

/// Projects samples on grid (index grid.node(i, j)) at one radius onto all
/// channels with |kappa| <= k_max. ConfigurationError if 2 k_max > grid.l_max().
[[nodiscard]] ChannelCoefficients project(std::span<const Spinor4> samples,
                                          const AngularGrid& grid, int k_max);

/// Projection of a field whose four components are independent of phi, sampled at
/// the Gauss nodes of grid along phi = 0 (one value per theta ring). Only
/// mu = +-1/2 channels can be nonzero and only those are produced.
[[nodiscard]] ChannelCoefficients project_axisymmetric(std::span<const Spinor4> ring_samples,
                                                       const AngularGrid& grid, int k_max);

/// Field values at every grid node for radius index ir.
[[nodiscard]] std::vector<Spinor4> reconstruct(const ChannelCoefficients& coeffs,
                                               const AngularGrid& grid, std::size_t ir = 0);
[[nodiscard]] Spinor4 reconstruct_at(const ChannelCoefficients& coeffs, const Direction& dir,
                                     std::size_t ir = 0);

/// K acts by -kappa on both basis vectors of channel (kappa, mu).
[[nodiscard]] ChannelCoefficients apply_K(const ChannelCoefficients& coeffs);
/// beta = diag(1, -1) in the channel basis.
[[nodiscard]] ChannelCoefficients apply_beta(const ChannelCoefficients& coeffs);

enum class AngularForm {
  bare,     ///< Delta_theta^power, power >= 0, eigenvalue l(l+1).
  shifted,  ///< (1 + Delta_theta)^power, any integer power.
};

/// Spectral multiplication per channel: the upper block uses l(kappa), the lower
/// block l(-kappa).
[[nodiscard]] ChannelCoefficients apply_angular_laplacian(const ChannelCoefficients& coeffs,
                                                          int power,
                                                          AngularForm form = AngularForm::bare);

/// Multiplier applied by apply_angular_laplacian to a block of degree l.
[[nodiscard]] double angular_multiplier(int l, int power, AngularForm form);

}  // namespace dcdiff
