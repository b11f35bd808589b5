#pragma once

// Constant matrices of the 3+1 Dirac representation and their radial
// (direction-dependent) combinations.

#include <array>
#include <complex>

#include <Eigen/Core>

namespace dcdiff {

using cplx = std::complex<double>;
using SpinorMatrix = Eigen::Matrix4cd;
using PauliMatrix = Eigen::Matrix2cd;
using Spinor4 = Eigen::Vector4cd;
using Spinor2 = Eigen::Vector2cd;

/// Point on the unit sphere, stored as a unit 3-vector.
class Direction {
 public:
  /// Throws ArgumentError if |v| differs from 1 by more than 1e-14.
  explicit Direction(const std::array<double, 3>& v);

  /// Direction with polar angle theta and azimuth phi.
  static Direction from_angles(double theta, double phi);

  [[nodiscard]] double x() const { return v_[0]; }
  [[nodiscard]] double y() const { return v_[1]; }
  [[nodiscard]] double z() const { return v_[2]; }
  [[nodiscard]] double operator[](int j) const { return v_[static_cast<std::size_t>(j)]; }
  [[nodiscard]] double theta() const;
  [[nodiscard]] double phi() const;

 private:
  std::array<double, 3> v_;
};

/// Minkowski metric eta = diag(-1, 1, 1, 1).
[[nodiscard]] double minkowski(int alpha, int beta);

/// gamma^index for index in 0..3; ArgumentError otherwise.
[[nodiscard]] SpinorMatrix gamma(int index);
/// Pauli sigma_j for j in 1..3.
[[nodiscard]] PauliMatrix pauli(int j);

[[nodiscard]] SpinorMatrix beta();
/// alpha_j = gamma^0 gamma^j, j in 1..3.
[[nodiscard]] SpinorMatrix alpha(int j);
/// Sigma_j = diag(sigma_j, sigma_j), j in 1..3.
[[nodiscard]] SpinorMatrix big_sigma(int j);
/// gamma5 = i gamma^0 gamma^1 gamma^2 gamma^3.
[[nodiscard]] SpinorMatrix gamma5();

[[nodiscard]] PauliMatrix sigma_r(const Direction& dir);
[[nodiscard]] SpinorMatrix alpha_r(const Direction& dir);
[[nodiscard]] SpinorMatrix big_sigma_r(const Direction& dir);

enum class RadialKind { sigma_r, alpha_r, Sigma_r };

/// Radial matrix of the given kind. sigma_r is returned in the upper-left
/// 2x2 block of an otherwise zero 4x4 matrix.
[[nodiscard]] SpinorMatrix radial_matrix(RadialKind kind, const Direction& dir);

}  // namespace dcdiff
