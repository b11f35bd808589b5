#pragma once

#include <vector>

namespace dcdiff {

/// Graded radial grid r_i = r_max (i/N)^p, i = 0..N, with staggered half nodes
/// r_{i+1/2} = r_max ((i+1/2)/N)^p. r_0 = 0 and r_N = r_max carry Dirichlet data.
class RadialGrid {
 public:
  /// Throws ArgumentError unless N >= 64, r_max > 0 and p >= 2.
  RadialGrid(int n, double r_max, double grading = 2.0);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double r_max() const { return r_max_; }
  [[nodiscard]] double grading() const { return p_; }

  /// Integer node r_i, i in 0..N.
  [[nodiscard]] double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  /// Half node r_{i+1/2}, i in 0..N-1.
  [[nodiscard]] double half(int i) const { return halves_[static_cast<std::size_t>(i)]; }
  /// Dual cell width of integer node i (1..N-1): r_{i+1/2} - r_{i-1/2}.
  [[nodiscard]] double node_weight(int i) const { return node_w_[static_cast<std::size_t>(i)]; }
  /// Cell width of half node i+1/2: r_{i+1} - r_i.
  [[nodiscard]] double half_weight(int i) const { return half_w_[static_cast<std::size_t>(i)]; }

  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& halves() const { return halves_; }

  /// Local node spacing near radius r.
  [[nodiscard]] double spacing_at(double r) const;
  /// Index of the integer node closest to r.
  [[nodiscard]] int nearest_node(double r) const;

 private:
  int n_;
  double r_max_;
  double p_;
  std::vector<double> nodes_;
  std::vector<double> halves_;
  std::vector<double> node_w_;
  std::vector<double> half_w_;
};

}  // namespace dcdiff
