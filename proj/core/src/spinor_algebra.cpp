#include "dcdiff/spinor_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcdiff/errors.hpp"

namespace dcdiff {

namespace {

constexpr double kUnitTolerance = 1e-14;

const cplx I{0.0, 1.0};

SpinorMatrix blocks(const PauliMatrix& a, const PauliMatrix& b, const PauliMatrix& c,
                    const PauliMatrix& d) {
  SpinorMatrix m;
  m.topLeftCorner<2, 2>() = a;
  m.topRightCorner<2, 2>() = b;
  m.bottomLeftCorner<2, 2>() = c;
  m.bottomRightCorner<2, 2>() = d;
  return m;
}

void check_spatial(int j) {
  if (j < 1 || j > 3) {
    throw ArgumentError("spatial index must be 1..3, got " + std::to_string(j));
  }
}

}  // namespace

Direction::Direction(const std::array<double, 3>& v) : v_(v) {
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(std::abs(norm - 1.0) <= kUnitTolerance)) {
    throw ArgumentError("direction is not a unit vector");
  }
}

Direction Direction::from_angles(double theta, double phi) {
  const double s = std::sin(theta);
  std::array<double, 3> v{s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (auto& c : v) c /= norm;
  return Direction(v);
}

double Direction::theta() const { return std::acos(std::clamp(v_[2], -1.0, 1.0)); }
double Direction::phi() const { return std::atan2(v_[1], v_[0]); }

double minkowski(int alpha, int beta) {
  if (alpha != beta) return 0.0;
  return alpha == 0 ? -1.0 : 1.0;
}

PauliMatrix pauli(int j) {
  check_spatial(j);
  PauliMatrix s;
  switch (j) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

SpinorMatrix gamma(int index) {
  if (index < 0 || index > 3) {
    throw ArgumentError("gamma index must be 0..3, got " + std::to_string(index));
  }
  const PauliMatrix id = PauliMatrix::Identity();
  const PauliMatrix zero = PauliMatrix::Zero();
  if (index == 0) return blocks(id, zero, zero, -id);
  const PauliMatrix s = pauli(index);
  return blocks(zero, s, -s, zero);
}

SpinorMatrix beta() { return gamma(0); }

SpinorMatrix alpha(int j) {
  check_spatial(j);
  return gamma(0) * gamma(j);
}

SpinorMatrix big_sigma(int j) {
  const PauliMatrix s = pauli(j);
  return blocks(s, PauliMatrix::Zero(), PauliMatrix::Zero(), s);
}

SpinorMatrix gamma5() { return I * gamma(0) * gamma(1) * gamma(2) * gamma(3); }

PauliMatrix sigma_r(const Direction& dir) {
  PauliMatrix m = PauliMatrix::Zero();
  for (int j = 1; j <= 3; ++j) m += dir[j - 1] * pauli(j);
  return m;
}

SpinorMatrix alpha_r(const Direction& dir) {
  SpinorMatrix m = SpinorMatrix::Zero();
  for (int j = 1; j <= 3; ++j) m += dir[j - 1] * alpha(j);
  return m;
}

SpinorMatrix big_sigma_r(const Direction& dir) {
  SpinorMatrix m = SpinorMatrix::Zero();
  for (int j = 1; j <= 3; ++j) m += dir[j - 1] * big_sigma(j);
  return m;
}

SpinorMatrix radial_matrix(RadialKind kind, const Direction& dir) {
  switch (kind) {
    case RadialKind::sigma_r: {
      SpinorMatrix m = SpinorMatrix::Zero();
      m.topLeftCorner<2, 2>() = sigma_r(dir);
      return m;
    }
    case RadialKind::alpha_r: return alpha_r(dir);
    case RadialKind::Sigma_r: return big_sigma_r(dir);
  }
  throw ArgumentError("unknown radial matrix kind");
}

}  // namespace dcdiff
