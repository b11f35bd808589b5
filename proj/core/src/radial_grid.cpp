#include "dcdiff/radial_grid.hpp"

#include <algorithm>
#include <cmath>

#include "dcdiff/errors.hpp"

namespace dcdiff {

RadialGrid::RadialGrid(int n, double r_max, double grading) : n_(n), r_max_(r_max), p_(grading) {
  if (n < 64) throw ArgumentError("RadialGrid: N must be at least 64");
  if (!(r_max > 0.0)) throw ArgumentError("RadialGrid: r_max must be positive");
  if (!(grading >= 2.0)) throw ArgumentError("RadialGrid: grading exponent must be >= 2");
  const auto un = static_cast<std::size_t>(n);
  nodes_.resize(un + 1);
  halves_.resize(un);
  for (int i = 0; i <= n; ++i) nodes_[static_cast<std::size_t>(i)] = r_max * std::pow(static_cast<double>(i) / n, p_);
  nodes_[un] = r_max;
  for (int i = 0; i < n; ++i) halves_[static_cast<std::size_t>(i)] = r_max * std::pow((i + 0.5) / n, p_);
  half_w_.resize(un);
  for (std::size_t i = 0; i < un; ++i) half_w_[i] = nodes_[i + 1] - nodes_[i];
  node_w_.assign(un + 1, 0.0);
  for (std::size_t i = 1; i < un; ++i) node_w_[i] = halves_[i] - halves_[i - 1];
}

double RadialGrid::spacing_at(double r) const {
  const int i = std::clamp(nearest_node(r), 0, n_ - 1);
  return half_weight(i);
}

int RadialGrid::nearest_node(double r) const {
  const double x = std::pow(std::clamp(r / r_max_, 0.0, 1.0), 1.0 / p_);
  return std::clamp(static_cast<int>(std::lround(x * n_)), 0, n_);
}

}  // namespace dcdiff
