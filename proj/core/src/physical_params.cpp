#include "dcdiff/physical_params.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "dcdiff/errors.hpp"

namespace dcdiff {

RadialPotential::RadialPotential()
    : value_([](double) { return 0.0; }),
      derivative_([](double) { return 0.0; }),
      description_("zero"),
      zero_(true) {}

RadialPotential::RadialPotential(std::function<double(double)> value,
                                 std::function<double(double)> derivative, std::string description)
    : value_(std::move(value)), derivative_(std::move(derivative)), description_(std::move(description)) {}

RadialPotential RadialPotential::polynomial(std::vector<double> coefficients) {
  bool all_zero = true;
  for (double c : coefficients) all_zero = all_zero && c == 0.0;
  if (all_zero) return RadialPotential();
  auto value = [c = coefficients](double r) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + *it;
    return acc;
  };
  auto derivative = [c = coefficients](double r) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * r + static_cast<double>(k) * c[k];
    return acc;
  };
  std::ostringstream os;
  os << "polynomial[";
  for (std::size_t k = 0; k < coefficients.size(); ++k) os << (k ? "," : "") << coefficients[k];
  os << "]";
  return {value, derivative, os.str()};
}

void RadialPotential::validate(double r_max, int samples) const {
  for (int k = 0; k <= samples; ++k) {
    const double r = r_max * k / samples;
    if (!std::isfinite(value_(r)) || !std::isfinite(derivative_(r))) {
      throw ArgumentError("potential V is not finite at r=" + std::to_string(r));
    }
  }
}

void PhysicalParams::validate(double r_max) const {
  if (!(m >= 0.0)) throw ArgumentError("mass m must be nonnegative");
  if (!std::isfinite(Z)) throw ArgumentError("coupling Z must be finite");
  V.validate(r_max);
}

}  // namespace dcdiff
