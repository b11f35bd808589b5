#include "dcdiff/indicial_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dcdiff/errors.hpp"

namespace dcdiff {

namespace {
constexpr double kWindowLo = 0.5;
constexpr double kWindowHi = 1.5;
constexpr double kEndpointTol = 1e-12;
}  // namespace

bool in_critical_window(double im_sigma) {
  return im_sigma >= kWindowLo - kEndpointTol && im_sigma <= kWindowHi + kEndpointTol;
}

IndicialRootSet boundary_spectrum(double Z, int kappa_max) {
  if (kappa_max < 1) throw ArgumentError("boundary_spectrum: kappa_max must be >= 1");
  IndicialRootSet set;
  set.Z = Z;
  const std::complex<double> I{0.0, 1.0};
  for (int kappa = -kappa_max; kappa <= kappa_max; ++kappa) {
    if (kappa == 0) continue;
    const std::complex<double> disc{static_cast<double>(kappa) * kappa - Z * Z, 0.0};
    const std::complex<double> root = std::sqrt(disc);
    IndicialRoot r{};
    r.kappa = kappa;
    r.sigma_plus = I + I * root;
    r.sigma_minus = I - I * root;
    r.imaginary = std::abs(Z) <= std::abs(kappa);
    r.in_window = in_critical_window(r.sigma_plus.imag()) || in_critical_window(r.sigma_minus.imag());
    set.roots.push_back(r);
    set.sorted_imag_parts.push_back(r.sigma_plus.imag());
    set.sorted_imag_parts.push_back(r.sigma_minus.imag());
  }
  std::sort(set.sorted_imag_parts.begin(), set.sorted_imag_parts.end());
  return set;
}

SelfAdjointnessReport selfadjointness_check(double Z, int kappa_max) {
  SelfAdjointnessReport report{SelfAdjointness::essentially_selfadjoint, {}};
  const auto set = boundary_spectrum(Z, std::max(kappa_max, 1));
  for (const auto& r : set.roots) {
    if (r.in_window) report.witnesses.push_back(r);
  }
  if (!report.witnesses.empty()) report.verdict = SelfAdjointness::extension_needed;
  return report;
}

void require_selfadjoint(double Z) {
  const auto report = selfadjointness_check(Z);
  if (report.verdict == SelfAdjointness::extension_needed) {
    std::ostringstream os;
    os << "|Z|=" << std::abs(Z) << " is not below sqrt(3)/2: indicial roots enter [1/2, 3/2]"
       << " (witness kappa=" << report.witnesses.front().kappa << "); refusing";
    throw DomainError(os.str());
  }
}

namespace {

struct HardyIntegrals {
  double lhs2;
  double rhs2;
};

// Integrals over x = (r/r_max)^(1/p) on nodes 0, stride, 2*stride, ..., N.
HardyIntegrals hardy_integrals(std::span<const double> u, const RadialGrid& grid, int stride) {
  const int n = grid.n() / stride;
  const double p = grid.grading();
  const double r_max = grid.r_max();
  const double hx = static_cast<double>(stride) / grid.n();
  auto sample = [&](int k) { return u[static_cast<std::size_t>(k * stride)]; };
  // fourth-order stencils, one-sided within two nodes of either end
  auto dudx = [&](int k) {
    if (k < 2 || k > n - 2) {
      const double sgn = k < 2 ? 1.0 : -1.0;
      const int base = k < 2 ? 0 : n;
      const int off = k < 2 ? k : n - k;
      static constexpr double w0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
      static constexpr double w1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
      const double* w = off == 0 ? w0 : w1;
      double acc = 0.0;
      for (int j = 0; j < 5; ++j) acc += w[j] * sample(base + static_cast<int>(sgn) * j);
      return sgn * acc / (12.0 * hx);
    }
    return (-sample(k + 2) + 8.0 * sample(k + 1) - 8.0 * sample(k - 1) + sample(k - 2)) / (12.0 * hx);
  };
  double lhs = 0.0;
  double rhs = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double x = static_cast<double>(k) / n;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    // |u/r|^2 r^2 dr = u^2 r'(x) dx
    const double jac = p * r_max * std::pow(x, p - 1.0);
    lhs += w * sample(k) * sample(k) * jac;
    // |u_r|^2 r^2 dr = (u_x)^2 r^2 / r'(x) dx = (u_x)^2 r_max x^(p+1) / p dx
    const double g = dudx(k);
    rhs += w * g * g * r_max * std::pow(x, p + 1.0) / p;
  }
  const double fourpi = 4.0 * std::numbers::pi;
  return {fourpi * lhs * hx / 3.0, 4.0 * fourpi * rhs * hx / 3.0};
}

}  // namespace

HardyResult hardy_check(std::span<const double> u, const RadialGrid& grid) {
  if (u.size() != static_cast<std::size_t>(grid.n()) + 1) {
    throw ArgumentError("hardy_check: expected one sample per integer node including r=0");
  }
  if (grid.n() % 4 != 0) throw ArgumentError("hardy_check: N must be divisible by 4");
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return {0.0, 0.0, true};
  if (std::abs(u.back()) > 1e-8 * peak) {
    throw ArgumentError("hardy_check: profile does not vanish at r_max");
  }
  const auto fine = hardy_integrals(u, grid, 1);
  const auto coarse = hardy_integrals(u, grid, 2);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); };
  if (rel(fine.lhs2, coarse.lhs2) > 1e-4 || rel(fine.rhs2, coarse.rhs2) > 1e-4) {
    throw PrecisionError("hardy_check: profile not resolved by the grid");
  }
  HardyResult r{std::sqrt(fine.lhs2), std::sqrt(fine.rhs2), false};
  r.holds = r.lhs <= r.rhs + 1e-8 * r.rhs;
  return r;
}

}  // namespace dcdiff
