#include "dcdiff/radial_dirac.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Dense>
#include <lapacke.h>

#include "dcdiff/errors.hpp"
#include "dcdiff/indicial_analysis.hpp"

namespace dcdiff {

// ---------------------------------------------------------------------------
// State

RadialChannelState RadialChannelState::zero(const ChannelIndex& ch, const RadialGrid& grid) {
  RadialChannelState s;
  s.channel = ch;
  s.F.assign(static_cast<std::size_t>(grid.n()) + 1, cplx{});
  s.G.assign(static_cast<std::size_t>(grid.n()), cplx{});
  return s;
}

double RadialChannelState::norm_squared(const RadialGrid& grid) const {
  double acc = 0.0;
  for (int i = 1; i < grid.n(); ++i) acc += grid.node_weight(i) * std::norm(F[static_cast<std::size_t>(i)]);
  for (int i = 0; i < grid.n(); ++i) acc += grid.half_weight(i) * std::norm(G[static_cast<std::size_t>(i)]);
  return acc;
}

// ---------------------------------------------------------------------------
// Hamiltonian

RadialHamiltonian::RadialHamiltonian(int kappa, PhysicalParams params, std::shared_ptr<const RadialGrid> grid)
    : kappa_(kappa), params_(std::move(params)), grid_(std::move(grid)) {
  if (kappa == 0) throw ArgumentError("RadialHamiltonian: kappa must be nonzero");
  const RadialGrid& g = *grid_;
  const int n = g.n();
  const std::size_t dim = 2 * static_cast<std::size_t>(n) - 1;
  diag_.assign(dim, 0.0);
  off_.assign(dim - 1, 0.0);
  scale_.assign(dim, 0.0);
  const double m = params_.m;
  const double k = kappa;
  for (int i = 0; i < n; ++i) {
    const auto kg = static_cast<std::size_t>(2 * i);
    const double rh = g.half(i);
    const double wh = g.half_weight(i);
    scale_[kg] = std::sqrt(wh);
    diag_[kg] = params_.a0(rh) - m;
    const double avg = k * wh / (2.0 * rh);
    if (i >= 1) {
      // F_i -- G_{i+1/2}
      off_[kg - 1] = (-1.0 + avg) / std::sqrt(wh * g.node_weight(i));
    }
    if (i + 1 <= n - 1) {
      // G_{i+1/2} -- F_{i+1}
      off_[kg] = (1.0 + avg) / std::sqrt(wh * g.node_weight(i + 1));
    }
  }
  for (int i = 1; i < n; ++i) {
    const auto kf = static_cast<std::size_t>(2 * i - 1);
    scale_[kf] = std::sqrt(g.node_weight(i));
    diag_[kf] = params_.a0(g.node(i)) + m;
  }
  const double gamma = std::sqrt(std::max(0.0, k * k - params_.Z * params_.Z));
  int inner = 0;
  while (inner < n && g.node(inner + 1) < 0.01 * g.r_max()) ++inner;
  if (params_.Z != 0.0 && gamma < 1.0 && inner < 8) {
    std::ostringstream os;
    os << "grid too coarse near r=0 for indicial exponent " << gamma << " (kappa=" << kappa
       << "): only " << inner << " nodes below 0.01*r_max";
    warnings_.push_back(os.str());
  }
}

double RadialHamiltonian::norm_bound() const {
  double bound = 0.0;
  for (std::size_t k = 0; k < diag_.size(); ++k) {
    double row = std::abs(diag_[k]);
    if (k > 0) row += std::abs(off_[k - 1]);
    if (k + 1 < diag_.size()) row += std::abs(off_[k]);
    bound = std::max(bound, row);
  }
  return bound;
}

void RadialHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t n = diag_.size();
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = diag_[k] * x[k];
    if (k > 0) acc += off_[k - 1] * x[k - 1];
    if (k + 1 < n) acc += off_[k] * x[k + 1];
    y[k] = acc;
  }
}

std::vector<cplx> RadialHamiltonian::pack(const RadialChannelState& s) const {
  const int n = grid_->n();
  std::vector<cplx> x(diag_.size());
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(2 * i);
    x[k] = scale_[k] * s.G[static_cast<std::size_t>(i)];
  }
  for (int i = 1; i < n; ++i) {
    const auto k = static_cast<std::size_t>(2 * i - 1);
    x[k] = scale_[k] * s.F[static_cast<std::size_t>(i)];
  }
  return x;
}

RadialChannelState RadialHamiltonian::unpack(std::span<const cplx> x, const ChannelIndex& ch) const {
  auto s = RadialChannelState::zero(ch, *grid_);
  const int n = grid_->n();
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(2 * i);
    s.G[static_cast<std::size_t>(i)] = x[k] / scale_[k];
  }
  for (int i = 1; i < n; ++i) {
    const auto k = static_cast<std::size_t>(2 * i - 1);
    s.F[static_cast<std::size_t>(i)] = x[k] / scale_[k];
  }
  return s;
}

RadialHamiltonian build_hamiltonian(const ChannelIndex& ch, const PhysicalParams& params,
                                    std::shared_ptr<const RadialGrid> grid) {
  require_selfadjoint(params.Z);
  params.validate(grid->r_max());
  return RadialHamiltonian(ch.kappa(), params, std::move(grid));
}

// ---------------------------------------------------------------------------
// Crank-Nicolson

CrankNicolson::CrankNicolson(const RadialHamiltonian& h, double dt) : h_(&h), dt_(dt), half_dt_(0.5 * dt) {
  if (!(dt > 0.0)) throw ArgumentError("CrankNicolson: dt must be positive");
  const auto& d = h.diagonal();
  const auto& e = h.off_diagonal();
  const std::size_t n = d.size();
  const cplx ia{0.0, half_dt_};
  lower_.assign(n, cplx{});
  inv_piv_.assign(n, cplx{});
  upper_.assign(n, cplx{});
  cplx piv = 1.0 + ia * d[0];
  inv_piv_[0] = 1.0 / piv;
  for (std::size_t k = 1; k < n; ++k) {
    const cplx eps = ia * e[k - 1];
    lower_[k] = eps * inv_piv_[k - 1];
    upper_[k - 1] = eps * inv_piv_[k - 1];
    piv = 1.0 + ia * d[k] - lower_[k] * eps;
    // Re(piv) >= 1 for Hermitian H, so this cannot vanish.
    if (!(std::abs(piv) > 0.0) || !std::isfinite(piv.real()) || !std::isfinite(piv.imag())) {
      throw NumericalError("CrankNicolson: singular tridiagonal factorization");
    }
    inv_piv_[k] = 1.0 / piv;
  }
}

void CrankNicolson::step(std::span<cplx> x) const {
  std::vector<cplx> scratch(x.size());
  step(x, scratch);
}

void CrankNicolson::step(std::span<cplx> x, std::span<cplx> y) const {
  const double* d = h_->diagonal().data();
  const double* e = h_->off_diagonal().data();
  const cplx* lo = lower_.data();
  const cplx* up = upper_.data();
  const cplx* inv = inv_piv_.data();
  const std::size_t n = h_->dimension();
  const double a = half_dt_;
  // Forward sweep: y = L^{-1} (I - i a H) x. Only the l_k y_{k-1} term is on
  // the dependency chain; the U^{-1} scaling is folded in as y_k / u_k.
  auto rhs = [&](std::size_t k, cplx hx) { return cplx{x[k].real() + a * hx.imag(), x[k].imag() - a * hx.real()}; };
  cplx prev = rhs(0, d[0] * x[0] + e[0] * x[1]);
  y[0] = prev * inv[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const cplx hx = d[k] * x[k] + e[k - 1] * x[k - 1] + e[k] * x[k + 1];
    prev = rhs(k, hx) - lo[k] * prev;
    y[k] = prev * inv[k];
  }
  {
    const std::size_t k = n - 1;
    prev = rhs(k, d[k] * x[k] + e[k - 1] * x[k - 1]) - lo[k] * prev;
    y[k] = prev * inv[k];
  }
  // Backward sweep with x_k = y_k / u_k - (eps_k / u_k) x_{k+1}.
  cplx next = y[n - 1];
  x[n - 1] = next;
  for (std::size_t k = n - 1; k-- > 0;) {
    next = y[k] - up[k] * next;
    x[k] = next;
  }
}

void CrankNicolson::step_pair(const CrankNicolson& a, std::span<cplx> xa, std::span<cplx> sa,
                              const CrankNicolson& b, std::span<cplx> xb, std::span<cplx> sb) {
  const std::size_t n = a.h_->dimension();
  if (b.h_->dimension() != n) throw ArgumentError("CrankNicolson::step_pair: dimension mismatch");
  const double* da = a.h_->diagonal().data();
  const double* ea = a.h_->off_diagonal().data();
  const double* db = b.h_->diagonal().data();
  const double* eb = b.h_->off_diagonal().data();
  const double ha = a.half_dt_;
  const double hb = b.half_dt_;
  auto rhs = [](cplx xk, double h, cplx hx) { return cplx{xk.real() + h * hx.imag(), xk.imag() - h * hx.real()}; };
  cplx pa = rhs(xa[0], ha, da[0] * xa[0] + ea[0] * xa[1]);
  cplx pb = rhs(xb[0], hb, db[0] * xb[0] + eb[0] * xb[1]);
  sa[0] = pa * a.inv_piv_[0];
  sb[0] = pb * b.inv_piv_[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const cplx hxa = da[k] * xa[k] + ea[k - 1] * xa[k - 1] + ea[k] * xa[k + 1];
    const cplx hxb = db[k] * xb[k] + eb[k - 1] * xb[k - 1] + eb[k] * xb[k + 1];
    pa = rhs(xa[k], ha, hxa) - a.lower_[k] * pa;
    pb = rhs(xb[k], hb, hxb) - b.lower_[k] * pb;
    sa[k] = pa * a.inv_piv_[k];
    sb[k] = pb * b.inv_piv_[k];
  }
  {
    const std::size_t k = n - 1;
    pa = rhs(xa[k], ha, da[k] * xa[k] + ea[k - 1] * xa[k - 1]) - a.lower_[k] * pa;
    pb = rhs(xb[k], hb, db[k] * xb[k] + eb[k - 1] * xb[k - 1]) - b.lower_[k] * pb;
    sa[k] = pa * a.inv_piv_[k];
    sb[k] = pb * b.inv_piv_[k];
  }
  cplx na = sa[n - 1];
  cplx nb = sb[n - 1];
  xa[n - 1] = na;
  xb[n - 1] = nb;
  for (std::size_t k = n - 1; k-- > 0;) {
    na = sa[k] - a.upper_[k] * na;
    nb = sb[k] - b.upper_[k] * nb;
    xa[k] = na;
    xb[k] = nb;
  }
}

RadialChannelState evolve_cn(const RadialChannelState& state, const RadialHamiltonian& h, double dt,
                             int n_steps) {
  if (n_steps < 0) throw ArgumentError("evolve_cn: negative step count");
  CrankNicolson cn(h, dt);
  auto x = h.pack(state);
  std::vector<cplx> scratch(x.size());
  for (int s = 0; s < n_steps; ++s) cn.step(x, scratch);
  return h.unpack(x, state.channel);
}

// ---------------------------------------------------------------------------
// Spectral oracle

SpectralEvolver::SpectralEvolver(const RadialHamiltonian& h) : h_(&h), n_(h.dimension()) {
  if (n_ > 8192) throw ArgumentError("SpectralEvolver: dimension above 8192 is not supported");
  // dstevr rather than dstevd: the divide-and-conquer path of some OpenBLAS
  // builds returns non-orthogonal vectors.
  std::vector<double> d = h.diagonal();
  std::vector<double> e = h.off_diagonal();
  e.push_back(0.0);
  values_.assign(n_, 0.0);
  vectors_.assign(n_ * n_, 0.0);
  std::vector<lapack_int> support(2 * n_);
  const auto n = static_cast<lapack_int>(n_);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, 0.0,
                                         &found, values_.data(), vectors_.data(), n, support.data());
  if (info != 0) throw NumericalError("SpectralEvolver: dstevr failed with info=" + std::to_string(info));
}

std::vector<cplx> SpectralEvolver::evolve(std::span<const cplx> x, double t) const {
  using Eigen::Map;
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const auto n = static_cast<Eigen::Index>(n_);
  Map<const MatrixXd> v(vectors_.data(), n, n);
  VectorXd re(n);
  VectorXd im(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    re(k) = x[static_cast<std::size_t>(k)].real();
    im(k) = x[static_cast<std::size_t>(k)].imag();
  }
  VectorXd cr = v.transpose() * re;
  VectorXd ci = v.transpose() * im;
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx c = cplx{cr(k), ci(k)} * std::polar(1.0, -values_[static_cast<std::size_t>(k)] * t);
    cr(k) = c.real();
    ci(k) = c.imag();
  }
  const VectorXd outr = v * cr;
  const VectorXd outi = v * ci;
  std::vector<cplx> out(n_);
  for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = {outr(k), outi(k)};
  return out;
}

RadialChannelState evolve_exact(const RadialChannelState& state, const RadialHamiltonian& h, double t) {
  SpectralEvolver ev(h);
  const auto x = h.pack(state);
  return h.unpack(ev.evolve(x, t), state.channel);
}

// ---------------------------------------------------------------------------
// Spectra

namespace {

std::vector<double> eigenvalues_in(const RadialHamiltonian& h, double lo, double hi, bool with_vectors,
                                   std::vector<double>* vectors) {
  std::vector<double> d = h.diagonal();
  std::vector<double> e = h.off_diagonal();
  e.push_back(0.0);
  const auto n = static_cast<lapack_int>(d.size());
  lapack_int found = 0;
  std::vector<double> w(d.size());
  std::vector<lapack_int> isuppz(2 * d.size());
  std::vector<double> z;
  lapack_int ldz = 1;
  if (with_vectors) {
    z.assign(d.size() * 8, 0.0);  // at most 8 vectors requested by callers
    ldz = n;
  } else {
    z.assign(1, 0.0);
  }
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'V', n, d.data(),
                                         e.data(), lo, hi, 0, 0, 0.0, &found, w.data(), z.data(), ldz,
                                         isuppz.data());
  if (info != 0) throw NumericalError("dstevr failed with info=" + std::to_string(info));
  w.resize(static_cast<std::size_t>(found));
  if (vectors) {
    z.resize(static_cast<std::size_t>(found) * d.size());
    *vectors = std::move(z);
  }
  return w;
}

}  // namespace

std::vector<double> bound_states(const ChannelIndex& ch, const PhysicalParams& params,
                                 std::shared_ptr<const RadialGrid> grid) {
  if (!(params.m > 0.0)) return {};
  const auto h = build_hamiltonian(ch, params, std::move(grid));
  auto w = eigenvalues_in(h, -params.m, params.m, false, nullptr);
  std::erase_if(w, [&](double v) { return !(std::abs(v) < params.m); });
  std::sort(w.begin(), w.end());
  return w;
}

Eigenpair eigenpair_near(const RadialHamiltonian& h, double target) {
  const double scale = std::max(1.0, h.norm_bound());
  for (double delta = 1e-6 * scale; delta < 4.0 * scale; delta *= 4.0) {
    std::vector<double> vecs;
    const auto w = eigenvalues_in(h, target - delta, target + delta, true, &vecs);
    if (w.empty()) continue;
    if (w.size() > 8) break;
    std::size_t best = 0;
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (std::abs(w[k] - target) < std::abs(w[best] - target)) best = k;
    }
    const std::size_t n = h.dimension();
    std::vector<double> v(vecs.begin() + static_cast<std::ptrdiff_t>(best * n),
                          vecs.begin() + static_cast<std::ptrdiff_t>((best + 1) * n));
    return {w[best], std::move(v)};
  }
  throw NumericalError("eigenpair_near: no isolated eigenvalue found near target");
}

BoundStateEstimate extrapolate_bound_state(const ChannelIndex& ch, const PhysicalParams& params, int n0,
                                           double r_max, double grading, int excitation, int levels) {
  if (levels < 3) throw ArgumentError("extrapolate_bound_state: need at least 3 levels");
  BoundStateEstimate est{};
  for (int j = 0; j < levels; ++j) {
    const int n = n0 << j;
    auto grid = std::make_shared<const RadialGrid>(n, r_max, grading);
    auto w = bound_states(ch, params, grid);
    std::sort(w.begin(), w.end(), [&](double a, double b) {
      return (params.m - std::abs(a)) > (params.m - std::abs(b));
    });
    if (static_cast<int>(w.size()) <= excitation) {
      throw NumericalError("extrapolate_bound_state: requested state not present at N=" + std::to_string(n));
    }
    est.n_levels.push_back(n);
    est.values.push_back(w[static_cast<std::size_t>(excitation)]);
  }
  const std::size_t k = est.values.size();
  const double d1 = est.values[k - 2] - est.values[k - 3];
  const double d2 = est.values[k - 1] - est.values[k - 2];
  double order = 2.0;
  if (d2 != 0.0 && d1 / d2 > 1.0 && std::isfinite(d1 / d2)) order = std::log2(d1 / d2);
  est.observed_order = order;
  est.extrapolated = est.values[k - 1] + d2 / (std::pow(2.0, order) - 1.0);
  return est;
}

}  // namespace dcdiff
