#pragma once

#include <functional>
#include <string>
#include <vector>

namespace dcdiff {

/// Smooth radial potential V(r) together with its derivative.
class RadialPotential {
 public:
  /// V = 0.
  RadialPotential();
  RadialPotential(std::function<double(double)> value, std::function<double(double)> derivative,
                  std::string description);

  /// V(r) = sum_k c_k r^k.
  static RadialPotential polynomial(std::vector<double> coefficients);

  [[nodiscard]] double operator()(double r) const { return value_(r); }
  [[nodiscard]] double derivative(double r) const { return derivative_(r); }
  [[nodiscard]] bool is_zero() const { return zero_; }
  [[nodiscard]] const std::string& description() const { return description_; }

  /// Samples V and V' on [0, r_max]; throws ArgumentError on non-finite values.
  void validate(double r_max, int samples = 1024) const;

 private:
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  std::string description_;
  bool zero_ = false;
};

/// Coupling Z, mass m and smooth part V of A_0 = Z/r + V (natural units).
struct PhysicalParams {
  double Z = 0.0;
  double m = 0.0;
  RadialPotential V;

  /// A_0(r) = Z/r + V(r).
  [[nodiscard]] double a0(double r) const { return Z / r + V(r); }
  /// d/dr A_0.
  [[nodiscard]] double a0_derivative(double r) const { return -Z / (r * r) + V.derivative(r); }
  /// Throws ArgumentError if m < 0 or V is not finite on [0, r_max].
  void validate(double r_max) const;
};

}  // namespace dcdiff
