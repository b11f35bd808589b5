#include "dcdiff/angular_channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dcdiff/errors.hpp"

namespace dcdiff {

namespace {

constexpr double kPi = std::numbers::pi;

int iabs(int v) { return v < 0 ? -v : v; }

}  // namespace

// ---------------------------------------------------------------------------
// ChannelIndex

bool ChannelIndex::is_valid(int kappa, int two_mu) {
  if (kappa == 0) return false;
  if (iabs(two_mu) % 2 != 1) return false;
  return iabs(two_mu) <= 2 * iabs(kappa) - 1;
}

ChannelIndex::ChannelIndex(int kappa, int two_mu) : kappa_(kappa), two_mu_(two_mu) {
  if (!is_valid(kappa, two_mu)) {
    throw ArgumentError("invalid channel (kappa=" + std::to_string(kappa) +
                        ", 2mu=" + std::to_string(two_mu) + ")");
  }
}

std::vector<ChannelIndex> enumerate_channels(int k_max, bool axis_only) {
  std::vector<ChannelIndex> out;
  for (int kappa = -k_max; kappa <= k_max; ++kappa) {
    if (kappa == 0) continue;
    const int top = 2 * iabs(kappa) - 1;
    for (int two_mu = -top; two_mu <= top; two_mu += 2) {
      if (axis_only && iabs(two_mu) != 1) continue;
      out.emplace_back(kappa, two_mu);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scalar harmonics

std::vector<double> normalized_legendre(int m, int l_max, double x) {
  const int am = iabs(m);
  if (l_max < am) return {};
  std::vector<double> out(static_cast<std::size_t>(l_max - am + 1));
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int k = 1; k <= am; ++k) {
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  }
  out[0] = pmm;
  if (l_max > am) {
    out[1] = x * std::sqrt(2.0 * am + 3.0) * pmm;
  }
  double a_prev = std::sqrt(2.0 * am + 3.0);
  for (int l = am + 2; l <= l_max; ++l) {
    const double l2 = static_cast<double>(l) * l;
    const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - static_cast<double>(am) * am));
    const auto k = static_cast<std::size_t>(l - am);
    out[k] = a * (x * out[k - 1] - out[k - 2] / a_prev);
    a_prev = a;
  }
  if (m < 0 && (am % 2 == 1)) {
    for (auto& v : out) v = -v;
  }
  return out;
}

cplx spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || iabs(m) > l) return {0.0, 0.0};
  const auto column = normalized_legendre(m, l, std::cos(theta));
  return column.back() * std::polar(1.0, m * phi);
}

// ---------------------------------------------------------------------------
// Spinor harmonics

SpinorHarmonicCoefficients spinor_harmonic_coefficients(const ChannelIndex& ch) {
  const double kappa = ch.kappa();
  const double mu = ch.mu();
  const double denom = 2.0 * kappa + 1.0;
  const double sign = ch.kappa() < 0 ? 1.0 : -1.0;  // sgn(-kappa)
  const double up = std::max(0.0, (kappa + 0.5 - mu) / denom);
  const double lo = std::max(0.0, (kappa + 0.5 + mu) / denom);
  return {sign * std::sqrt(up), std::sqrt(lo)};
}

Spinor2 spherical_spinor(const ChannelIndex& ch, double theta, double phi) {
  const auto c = spinor_harmonic_coefficients(ch);
  const int l = ch.l();
  const int m_up = (ch.two_mu() - 1) / 2;
  const int m_lo = (ch.two_mu() + 1) / 2;
  Spinor2 out;
  out(0) = c.upper * spherical_harmonic(l, m_up, theta, phi);
  out(1) = c.lower * spherical_harmonic(l, m_lo, theta, phi);
  return out;
}

Spinor2 spherical_spinor(const ChannelIndex& ch, const Direction& dir) {
  return spherical_spinor(ch, dir.theta(), dir.phi());
}

// ---------------------------------------------------------------------------
// Quadrature

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ArgumentError("gauss_legendre: n must be positive");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    nodes[lo] = -x;
    nodes[hi] = x;
    weights[lo] = w;
    weights[hi] = w;
  }
}

AngularGrid::AngularGrid(int l_max) : l_max_(l_max), n_phi_(2 * l_max + 2) {
  if (l_max < 0) throw ArgumentError("AngularGrid: l_max must be nonnegative");
  gauss_legendre(l_max + 1, cos_theta_, gauss_weight_);
  weight_.resize(gauss_weight_.size());
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    weight_[i] = gauss_weight_[i] * 2.0 * kPi / n_phi_;
  }
}

double AngularGrid::theta(int i) const { return std::acos(cos_theta(i)); }
double AngularGrid::phi(int j) const { return 2.0 * kPi * j / n_phi_; }
Direction AngularGrid::direction(int i, int j) const { return Direction::from_angles(theta(i), phi(j)); }

// ---------------------------------------------------------------------------
// Coefficient container

ChannelPair& ChannelCoefficients::at(const ChannelIndex& ch) {
  auto it = channels_.find(ch);
  if (it == channels_.end()) {
    ChannelPair p{std::vector<cplx>(n_radii_), std::vector<cplx>(n_radii_)};
    it = channels_.emplace(ch, std::move(p)).first;
  }
  return it->second;
}

const ChannelPair* ChannelCoefficients::find(const ChannelIndex& ch) const {
  auto it = channels_.find(ch);
  return it == channels_.end() ? nullptr : &it->second;
}

int ChannelCoefficients::k_max() const {
  int k = 0;
  for (const auto& [ch, _] : channels_) k = std::max(k, iabs(ch.kappa()));
  return k;
}

double ChannelCoefficients::squared_norm(std::size_t ir) const {
  double s = 0.0;
  for (const auto& [ch, p] : channels_) s += std::norm(p.a[ir]) + std::norm(p.b[ir]);
  return s;
}

// ---------------------------------------------------------------------------
// Projection / reconstruction

namespace {

void check_resolution(const AngularGrid& grid, int k_max) {
  if (k_max < 1) throw ConfigurationError("K_max must be at least 1");
  if (2 * k_max > grid.l_max()) {
    throw ConfigurationError("K_max=" + std::to_string(k_max) +
                             " exceeds quadrature resolution (requires 2*K_max <= L_max=" +
                             std::to_string(grid.l_max()) + ")");
  }
}

// Table of Ybar_l^m(x_i) for one m across all rings, l = |m|..l_max.
struct LegendreTable {
  int m;
  int l_max;
  std::vector<std::vector<double>> rows;  // per ring
  [[nodiscard]] double value(std::size_t ring, int l) const {
    if (l < std::abs(m) || l > l_max) return 0.0;
    return rows[ring][static_cast<std::size_t>(l - std::abs(m))];
  }
};

LegendreTable make_table(const AngularGrid& grid, int m, int l_max) {
  LegendreTable t{m, l_max, {}};
  t.rows.reserve(static_cast<std::size_t>(grid.n_theta()));
  for (int i = 0; i < grid.n_theta(); ++i) t.rows.push_back(normalized_legendre(m, l_max, grid.cos_theta(i)));
  return t;
}

// a = <Omega_{kappa mu}, upper>, b = <Omega_{-kappa mu}, lower>, given ring integrals
// ring(c, m)[i] = integral over phi of u_c(theta_i, phi) e^{-i m phi}.
template <typename RingFn>
void accumulate_channel(ChannelCoefficients& out, const ChannelIndex& ch, const AngularGrid& grid,
                        const std::map<int, LegendreTable>& tables, RingFn ring) {
  const int m_up = (ch.two_mu() - 1) / 2;
  const int m_lo = (ch.two_mu() + 1) / 2;
  const auto cu = spinor_harmonic_coefficients(ch);
  const ChannelIndex fl = ch.flipped();
  const auto cl = spinor_harmonic_coefficients(fl);
  const auto& t_up = tables.at(m_up);
  const auto& t_lo = tables.at(m_lo);
  cplx a{0.0, 0.0};
  cplx b{0.0, 0.0};
  for (int i = 0; i < grid.n_theta(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double w = grid.gauss_weight(i);
    a += w * (cu.upper * t_up.value(ii, ch.l()) * ring(0, m_up, i) +
              cu.lower * t_lo.value(ii, ch.l()) * ring(1, m_lo, i));
    b += w * (cl.upper * t_up.value(ii, fl.l()) * ring(2, m_up, i) +
              cl.lower * t_lo.value(ii, fl.l()) * ring(3, m_lo, i));
  }
  auto& p = out.at(ch);
  p.a[0] = a;
  p.b[0] = b;
}

}  // namespace

ChannelCoefficients project(std::span<const Spinor4> samples, const AngularGrid& grid, int k_max) {
  check_resolution(grid, k_max);
  if (samples.size() != grid.size()) throw ArgumentError("project: sample count does not match grid");
  const int m_span = k_max + 1;
  const int n_m = 2 * m_span + 1;
  const int n_phi = grid.n_phi();
  const double dphi = 2.0 * kPi / n_phi;
  // ring[(i * 4 + c) * n_m + (m + m_span)]
  std::vector<cplx> ring(static_cast<std::size_t>(grid.n_theta()) * 4 * static_cast<std::size_t>(n_m));
  std::vector<cplx> phase(static_cast<std::size_t>(n_phi) * static_cast<std::size_t>(n_m));
  for (int j = 0; j < n_phi; ++j) {
    for (int m = -m_span; m <= m_span; ++m) {
      phase[static_cast<std::size_t>(j * n_m + m + m_span)] = std::polar(dphi, -m * grid.phi(j));
    }
  }
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const Spinor4& u = samples[grid.node(i, j)];
      for (int c = 0; c < 4; ++c) {
        cplx* dst = &ring[static_cast<std::size_t>((i * 4 + c) * n_m)];
        const cplx* ph = &phase[static_cast<std::size_t>(j * n_m)];
        for (int k = 0; k < n_m; ++k) dst[k] += u(c) * ph[k];
      }
    }
  }
  std::map<int, LegendreTable> tables;
  for (int m = -m_span; m <= m_span; ++m) tables.emplace(m, make_table(grid, m, k_max));
  auto ring_fn = [&](int c, int m, int i) -> cplx {
    return ring[static_cast<std::size_t>((i * 4 + c) * n_m + m + m_span)];
  };
  ChannelCoefficients out(1);
  for (const auto& ch : enumerate_channels(k_max)) accumulate_channel(out, ch, grid, tables, ring_fn);
  return out;
}

ChannelCoefficients project_axisymmetric(std::span<const Spinor4> ring_samples,
                                         const AngularGrid& grid, int k_max) {
  check_resolution(grid, k_max);
  if (ring_samples.size() != static_cast<std::size_t>(grid.n_theta())) {
    throw ArgumentError("project_axisymmetric: expected one sample per theta ring");
  }
  std::map<int, LegendreTable> tables;
  for (int m = -1; m <= 1; ++m) tables.emplace(m, make_table(grid, m, k_max));
  // phi-independent components only have an m = 0 Fourier mode.
  auto ring_fn = [&](int c, int m, int i) -> cplx {
    if (m != 0) return {0.0, 0.0};
    return 2.0 * kPi * ring_samples[static_cast<std::size_t>(i)](c);
  };
  ChannelCoefficients out(1);
  for (const auto& ch : enumerate_channels(k_max, true)) accumulate_channel(out, ch, grid, tables, ring_fn);
  return out;
}

Spinor4 reconstruct_at(const ChannelCoefficients& coeffs, const Direction& dir, std::size_t ir) {
  const double theta = dir.theta();
  const double phi = dir.phi();
  Spinor4 u = Spinor4::Zero();
  for (const auto& [ch, p] : coeffs.channels()) {
    const Spinor2 up = spherical_spinor(ch, theta, phi);
    const Spinor2 lo = spherical_spinor(ch.flipped(), theta, phi);
    u.head<2>() += p.a[ir] * up;
    u.tail<2>() += p.b[ir] * lo;
  }
  return u;
}

std::vector<Spinor4> reconstruct(const ChannelCoefficients& coeffs, const AngularGrid& grid,
                                 std::size_t ir) {
  std::vector<Spinor4> out(grid.size(), Spinor4::Zero());
  const int k_max = coeffs.k_max();
  std::map<int, LegendreTable> tables;
  for (const auto& [ch, p] : coeffs.channels()) {
    for (int m : {(ch.two_mu() - 1) / 2, (ch.two_mu() + 1) / 2}) {
      if (!tables.contains(m)) tables.emplace(m, make_table(grid, m, std::max(k_max, 1)));
    }
  }
  for (const auto& [ch, p] : coeffs.channels()) {
    const int m_up = (ch.two_mu() - 1) / 2;
    const int m_lo = (ch.two_mu() + 1) / 2;
    const auto cu = spinor_harmonic_coefficients(ch);
    const ChannelIndex fl = ch.flipped();
    const auto cl = spinor_harmonic_coefficients(fl);
    const auto& t_up = tables.at(m_up);
    const auto& t_lo = tables.at(m_lo);
    for (int i = 0; i < grid.n_theta(); ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const double u0 = cu.upper * t_up.value(ii, ch.l());
      const double u1 = cu.lower * t_lo.value(ii, ch.l());
      const double l0 = cl.upper * t_up.value(ii, fl.l());
      const double l1 = cl.lower * t_lo.value(ii, fl.l());
      if (u0 == 0.0 && u1 == 0.0 && l0 == 0.0 && l1 == 0.0) continue;
      for (int j = 0; j < grid.n_phi(); ++j) {
        const double ph = grid.phi(j);
        const cplx e_up = std::polar(1.0, m_up * ph);
        const cplx e_lo = std::polar(1.0, m_lo * ph);
        Spinor4& u = out[grid.node(i, j)];
        u(0) += p.a[ir] * u0 * e_up;
        u(1) += p.a[ir] * u1 * e_lo;
        u(2) += p.b[ir] * l0 * e_up;
        u(3) += p.b[ir] * l1 * e_lo;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagonal operators

ChannelCoefficients apply_K(const ChannelCoefficients& coeffs) {
  ChannelCoefficients out = coeffs;
  for (auto& [ch, p] : out.channels()) {
    const double ev = -static_cast<double>(ch.kappa());
    for (auto& v : p.a) v *= ev;
    for (auto& v : p.b) v *= ev;
  }
  return out;
}

ChannelCoefficients apply_beta(const ChannelCoefficients& coeffs) {
  ChannelCoefficients out = coeffs;
  for (auto& [ch, p] : out.channels()) {
    for (auto& v : p.b) v = -v;
  }
  return out;
}

double angular_multiplier(int l, int power, AngularForm form) {
  const double ev = static_cast<double>(l) * (l + 1);
  if (form == AngularForm::bare) {
    if (power < 0) throw ArgumentError("bare angular Laplacian needs a nonnegative power");
    return std::pow(ev, power);
  }
  return std::pow(1.0 + ev, power);
}

ChannelCoefficients apply_angular_laplacian(const ChannelCoefficients& coeffs, int power,
                                            AngularForm form) {
  ChannelCoefficients out = coeffs;
  for (auto& [ch, p] : out.channels()) {
    const double fa = angular_multiplier(ch.l(), power, form);
    const double fb = angular_multiplier(ch.l_lower(), power, form);
    for (auto& v : p.a) v *= fa;
    for (auto& v : p.b) v *= fb;
  }
  return out;
}

}  // namespace dcdiff
