#include "dcdiff/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dcdiff/errors.hpp"
#include "dcdiff/indicial_analysis.hpp"
#include "dcdiff/parallel.hpp"

namespace dcdiff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

}  // namespace

// ---------------------------------------------------------------------------
// Source

void SourceSpec::validate() const {
  if (!(h > 0.0)) throw ArgumentError("source: h must be positive");
  if (!(r0 > 3.0 * h)) throw ArgumentError("source: r0 must exceed 3h");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw ArgumentError("source: psi0 must have unit norm");
}

double SourceSpec::amplitude(double r, double cos_theta) const {
  // |x - y|^2 with y on the polar axis
  const double d2 = r * r + r0 * r0 - 2.0 * r * r0 * cos_theta;
  return std::pow(2.0 * kPi * h * h, -1.5) * std::exp(-d2 / (2.0 * h * h));
}

ChannelStates build_initial_data(const SourceSpec& src, const RadialGrid& grid, int k_max) {
  src.validate();
  if (k_max < 1) throw ConfigurationError("build_initial_data: k_max must be at least 1");
  if (grid.spacing_at(src.r0) > src.h / 8.0) {
    throw PrecisionError("build_initial_data: radial grid does not resolve h (need 8 nodes per h)");
  }
  if (src.r0 + 8.0 * src.h >= grid.r_max()) {
    throw ConfigurationError("build_initial_data: source support reaches the outer wall");
  }
  // The Gaussian's Legendre content at radius r decays like exp(-l^2 h^2 / (2 r r0)),
  // so the quadrature is sized by the source, not by k_max.
  const double r_far = src.r0 + 8.0 * src.h;
  const int l_quad = std::max(2 * k_max, static_cast<int>(std::ceil(8.0 * std::sqrt(r_far * src.r0) / src.h)));
  const AngularGrid ang(l_quad);

  const auto channels = enumerate_channels(k_max, true);
  ChannelStates out;
  out.reserve(channels.size());
  for (const auto& ch : channels) out.push_back(RadialChannelState::zero(ch, grid));

  std::vector<Spinor4> ring(static_cast<std::size_t>(ang.n_theta()));
  auto project_at = [&](double r) {
    for (int i = 0; i < ang.n_theta(); ++i) {
      ring[static_cast<std::size_t>(i)] = src.psi0 * src.amplitude(r, ang.cos_theta(i));
    }
    return project_axisymmetric(ring, ang, k_max);
  };
  const double lo = src.r0 - 8.0 * src.h;
  const double hi = src.r0 + 8.0 * src.h;
  for (int i = 1; i < grid.n(); ++i) {
    const double r = grid.node(i);
    if (r < lo || r > hi) continue;
    const auto c = project_at(r);
    for (auto& s : out) {
      if (const auto* p = c.find(s.channel)) s.F[static_cast<std::size_t>(i)] = r * p->a[0];
    }
  }
  for (int i = 0; i < grid.n(); ++i) {
    const double r = grid.half(i);
    if (r < lo || r > hi) continue;
    const auto c = project_at(r);
    for (auto& s : out) {
      // lower block is i g Omega_{-kappa mu}
      if (const auto* p = c.find(s.channel)) s.G[static_cast<std::size_t>(i)] = -kI * r * p->b[0];
    }
  }
  std::erase_if(out, [&](const RadialChannelState& s) {
    return std::all_of(s.F.begin(), s.F.end(), [](cplx v) { return v == cplx{}; }) &&
           std::all_of(s.G.begin(), s.G.end(), [](cplx v) { return v == cplx{}; });
  });
  return out;
}

ChannelStates smooth_angular(const ChannelStates& states, int n) {
  if (n < 0) throw ArgumentError("smooth_angular: power must be non-negative");
  ChannelStates out = states;
  if (n == 0) return out;
  for (auto& s : out) {
    const double fu = angular_multiplier(s.channel.l(), -n, AngularForm::shifted);
    const double fl = angular_multiplier(s.channel.l_lower(), -n, AngularForm::shifted);
    for (auto& v : s.F) v *= fu;
    for (auto& v : s.G) v *= fl;
  }
  return out;
}

double total_norm_squared(const ChannelStates& states, const RadialGrid& grid) {
  double acc = 0.0;
  for (const auto& s : states) acc += s.norm_squared(grid);
  return acc;
}

double shell_mass(const ChannelStates& states, const RadialGrid& grid, int k) {
  double acc = 0.0;
  for (const auto& s : states) {
    if (std::abs(s.channel.kappa()) == k) acc += s.norm_squared(grid);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Field container

void SpacetimeField::allocate() {
  const std::size_t n = times.size() * radii.size() * angles.size();
  for (auto& img : images_) img.assign(n, Spinor4::Zero());
}

std::optional<std::size_t> SpacetimeField::find_time(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - t) <= 0.5 * dt) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Evolution

namespace {

struct AngularSamples {
  // Omega_{kappa mu} and Omega_{-kappa mu} at each sample angle (phi = 0)
  std::vector<Spinor2> upper;
  std::vector<Spinor2> lower;
};

AngularSamples sample_harmonics(const ChannelIndex& ch, const std::vector<double>& thetas) {
  AngularSamples s;
  s.upper.reserve(thetas.size());
  s.lower.reserve(thetas.size());
  for (double th : thetas) {
    s.upper.push_back(spherical_spinor(ch, th, 0.0));
    s.lower.push_back(spherical_spinor(ch.flipped(), th, 0.0));
  }
  return s;
}

struct ChannelContribution {
  std::vector<Spinor4> images[kAngularImages];
  std::vector<Spinor4> quad;  // field on the Gauss rings, diagnostics only
  std::vector<double> norms;
  std::vector<RadialChannelState> snapshots;
};

// Adds the channel's field at snapshot k into the image buffers.
void scatter_channel(const RadialChannelState& s, const RadialGrid& grid, const AngularSamples& harm,
                     std::size_t k, std::size_t n_radii, std::vector<Spinor4>* images) {
  const std::size_t n_ang = harm.upper.size();
  const double kap = -static_cast<double>(s.channel.kappa());
  const double lu = angular_multiplier(s.channel.l(), 1, AngularForm::bare);
  const double ll = angular_multiplier(s.channel.l_lower(), 1, AngularForm::bare);
  const double mult[kAngularImages] = {1.0, lu, lu * lu, kap, kap * kap};
  const double mult_lo[kAngularImages] = {1.0, ll, ll * ll, kap, kap * kap};
  for (std::size_t i = 0; i < n_radii; ++i) {
    const int node = static_cast<int>(i) + 1;
    const double r = grid.node(node);
    const cplx f = s.F[static_cast<std::size_t>(node)] / r;
    const cplx g = 0.5 * (s.G[static_cast<std::size_t>(node) - 1] + s.G[static_cast<std::size_t>(node)]) / r;
    if (f == cplx{} && g == cplx{}) continue;
    const cplx ig = kI * g;
    for (std::size_t q = 0; q < n_ang; ++q) {
      const Spinor2& up = harm.upper[q];
      const Spinor2& lo = harm.lower[q];
      const std::size_t idx = (k * n_radii + i) * n_ang + q;
      for (int img = 0; img < kAngularImages; ++img) {
        Spinor4& u = images[img][idx];
        const cplx fu = mult[img] * f;
        const cplx gl = mult_lo[img] * ig;
        u(0) += fu * up(0);
        u(1) += fu * up(1);
        u(2) += gl * lo(0);
        u(3) += gl * lo(1);
      }
    }
  }
}

void scatter_quadrature(const RadialChannelState& s, const RadialGrid& grid, const AngularSamples& harm,
                        std::size_t k, std::size_t n_radii, std::vector<Spinor4>& quad) {
  const std::size_t n_ang = harm.upper.size();
  for (std::size_t i = 0; i < n_radii; ++i) {
    const int node = static_cast<int>(i) + 1;
    const double r = grid.node(node);
    const cplx f = s.F[static_cast<std::size_t>(node)] / r;
    const cplx ig = kI * 0.5 * (s.G[static_cast<std::size_t>(node) - 1] + s.G[static_cast<std::size_t>(node)]) / r;
    if (f == cplx{} && ig == cplx{}) continue;
    for (std::size_t q = 0; q < n_ang; ++q) {
      Spinor4& u = quad[(k * n_radii + i) * n_ang + q];
      u(0) += f * harm.upper[q](0);
      u(1) += f * harm.upper[q](1);
      u(2) += ig * harm.lower[q](0);
      u(3) += ig * harm.lower[q](1);
    }
  }
}

}  // namespace

SpacetimeField fundamental_solution(const SimulationRequest& req) {
  if (!req.grid) throw ArgumentError("fundamental_solution: missing radial grid");
  require_selfadjoint(req.params.Z);
  req.params.validate(req.grid->r_max());
  if (!(req.dt > 0.0)) throw ArgumentError("fundamental_solution: dt must be positive");
  if (req.times.empty()) throw ArgumentError("fundamental_solution: no snapshot times");
  if (req.probe_angles.empty()) throw ArgumentError("fundamental_solution: no probe directions");
  const RadialGrid& grid = *req.grid;

  SpacetimeField field;
  field.source = req.source;
  field.params = req.params;
  field.grid = req.grid;
  field.k_max = req.k_max;
  field.dt = req.dt;
  field.smoothing_power = req.smoothing_power;
  field.angles = req.probe_angles;
  for (double t : req.times) {
    if (!(t >= 0.0)) throw ArgumentError("fundamental_solution: snapshot times must be non-negative");
    const long n = std::lround(t / req.dt);
    if (!field.steps.empty() && n <= field.steps.back()) {
      throw ArgumentError("fundamental_solution: snapshot times must be strictly increasing on the dt lattice");
    }
    field.steps.push_back(static_cast<int>(n));
    field.times.push_back(static_cast<double>(n) * req.dt);
  }
  field.radii.assign(grid.nodes().begin() + 1, grid.nodes().end() - 1);
  field.allocate();

  const ChannelStates initial = smooth_angular(build_initial_data(req.source, grid, req.k_max), req.smoothing_power);
  const std::size_t n_t = field.times.size();
  const std::size_t n_r = field.radii.size();
  const std::size_t n_q = field.angles.size();

  AngularGrid quad_grid(std::max(2 * req.k_max, 2));
  std::vector<double> quad_thetas;
  for (int i = 0; i < quad_grid.n_theta(); ++i) quad_thetas.push_back(quad_grid.theta(i));
  // diagnostic snapshots are packed densely in quad_field
  std::vector<long> diag_slot(n_t, -1);
  std::size_t n_diag = 0;
  for (double td : req.diagnostic_times) {
    bool found = false;
    for (std::size_t k = 0; k < n_t; ++k) {
      if (std::abs(field.times[k] - td) <= 0.5 * req.dt) {
        if (diag_slot[k] < 0) diag_slot[k] = static_cast<long>(n_diag++);
        found = true;
      }
    }
    if (!found) throw ArgumentError("fundamental_solution: diagnostic time is not a snapshot time");
  }
  std::vector<Spinor4> quad_field(n_diag * n_r * quad_thetas.size(), Spinor4::Zero());
  std::vector<double> norms(n_t, 0.0);
  if (req.keep_channels) field.channels.assign(n_t, ChannelStates{});

  // Channels are evolved two at a time so the serial sweeps of the pair overlap.
  const std::size_t n_pairs = (initial.size() + 1) / 2;
  auto work = [&](std::size_t p) {
    const std::size_t c0 = 2 * p;
    const std::size_t nc = std::min<std::size_t>(2, initial.size() - c0);
    ChannelContribution out;
    for (auto& img : out.images) img.assign(n_t * n_r * n_q, Spinor4::Zero());
    out.norms.assign(n_t, 0.0);
    if (n_diag > 0) out.quad.assign(n_diag * n_r * quad_thetas.size(), Spinor4::Zero());
    std::vector<AngularSamples> harm, qharm(nc);
    std::vector<RadialHamiltonian> hs;
    std::vector<CrankNicolson> cns;
    std::vector<std::vector<cplx>> xs, scratch;
    hs.reserve(nc);
    cns.reserve(nc);
    for (std::size_t j = 0; j < nc; ++j) {
      const RadialChannelState& s0 = initial[c0 + j];
      harm.push_back(sample_harmonics(s0.channel, field.angles));
      if (n_diag > 0) qharm[j] = sample_harmonics(s0.channel, quad_thetas);
      hs.push_back(build_hamiltonian(s0.channel, req.params, req.grid));
    }
    for (std::size_t j = 0; j < nc; ++j) {
      cns.emplace_back(hs[j], req.dt);
      xs.push_back(hs[j].pack(initial[c0 + j]));
      scratch.emplace_back(xs[j].size());
    }
    int step = 0;
    for (std::size_t k = 0; k < n_t; ++k) {
      for (; step < field.steps[k]; ++step) {
        if (nc == 2) {
          CrankNicolson::step_pair(cns[0], xs[0], scratch[0], cns[1], xs[1], scratch[1]);
        } else {
          cns[0].step(xs[0], scratch[0]);
        }
      }
      for (std::size_t j = 0; j < nc; ++j) {
        const auto s = hs[j].unpack(xs[j], initial[c0 + j].channel);
        out.norms[k] += s.norm_squared(grid);
        scatter_channel(s, grid, harm[j], k, n_r, out.images);
        if (diag_slot[k] >= 0) {
          scatter_quadrature(s, grid, qharm[j], static_cast<std::size_t>(diag_slot[k]), n_r, out.quad);
        }
        if (req.keep_channels) out.snapshots.push_back(s);
      }
    }
    return out;
  };
  auto commit = [&](std::size_t, ChannelContribution&& part) {
    for (int img = 0; img < kAngularImages; ++img) {
      auto& dst = field.image(static_cast<AngularImage>(img));
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += part.images[img][j];
    }
    for (std::size_t j = 0; j < quad_field.size(); ++j) quad_field[j] += part.quad[j];
    for (std::size_t k = 0; k < n_t; ++k) norms[k] += part.norms[k];
    if (req.keep_channels) {
      // snapshots are stored time-major, channel-minor within the pair
      const std::size_t nc = part.snapshots.size() / n_t;
      for (std::size_t k = 0; k < n_t; ++k) {
        for (std::size_t j = 0; j < nc; ++j) field.channels[k].push_back(std::move(part.snapshots[k * nc + j]));
      }
    }
  };
  ordered_parallel_map(n_pairs, req.threads, work, commit);
  field.norms = norms;

  field.mass.assign(n_t, std::nullopt);
  if (n_diag > 0) {
    const double r0 = req.source.r0;
    for (std::size_t k = 0; k < n_t; ++k) {
      if (diag_slot[k] < 0) continue;
      const auto slot = static_cast<std::size_t>(diag_slot[k]);
      const double cone = field.times[k] + 5.0 * req.source.h;
      MassDiagnostics md;
      for (std::size_t i = 0; i < n_r; ++i) {
        const int node = static_cast<int>(i) + 1;
        const double r = grid.node(node);
        const double w = grid.node_weight(node) * r * r;
        for (std::size_t q = 0; q < quad_thetas.size(); ++q) {
          const double dens =
              w * 2.0 * kPi * quad_grid.gauss_weight(static_cast<int>(q)) *
              quad_field[(slot * n_r + i) * quad_thetas.size() + q].squaredNorm();
          md.total += dens;
          const double ct = quad_grid.cos_theta(static_cast<int>(q));
          const double dist = std::sqrt(std::max(0.0, r * r + r0 * r0 - 2.0 * r * r0 * ct));
          if (dist > cone) md.outside_cone += dens;
        }
      }
      field.mass[k] = md;
    }
  }
  return field;
}

// ---------------------------------------------------------------------------
// Klein-Gordon residual

double klein_gordon_residual(const SpacetimeField& field, const ResidualRegion& region) {
  if (field.channels.empty()) throw ArgumentError("klein_gordon_residual: field has no channel snapshots");
  const std::size_t k = region.time_index;
  if (k == 0 || k + 1 >= field.times.size()) {
    throw ArgumentError("klein_gordon_residual: centre snapshot needs neighbours on both sides");
  }
  const int s_lo = field.steps[k] - field.steps[k - 1];
  const int s_hi = field.steps[k + 1] - field.steps[k];
  if (s_lo != s_hi) throw ArgumentError("klein_gordon_residual: neighbouring snapshots are not equally spaced");
  const RadialGrid& grid = *field.grid;
  if (!(region.r_lo > 0.0) || !(region.r_hi > region.r_lo)) {
    throw ArgumentError("klein_gordon_residual: region must satisfy 0 < r_lo < r_hi");
  }
  if (region.r_lo <= grid.node(2) || region.r_hi >= grid.node(grid.n() - 2)) {
    throw ArgumentError("klein_gordon_residual: region touches the grid edges");
  }
  const double delta = s_lo * field.dt;
  const double m2 = field.params.m * field.params.m;
  const auto& prev = field.channels[k - 1];
  const auto& cur = field.channels[k];
  const auto& next = field.channels[k + 1];

  auto time_part = [&](cplx um, cplx u0, cplx up, double a) {
    // (d_t + i A)^2 u
    const cplx ut = (up - um) / (2.0 * delta);
    const cplx utt = (up - 2.0 * u0 + um) / (delta * delta);
    return utt + 2.0 * kI * a * ut - a * a * u0;
  };
  auto second = [](double xm, double x0, double xp, cplx um, cplx u0, cplx up) {
    const double h1 = x0 - xm;
    const double h2 = xp - x0;
    return 2.0 * ((up - u0) / h2 - (u0 - um) / h1) / (h1 + h2);
  };

  double res = 0.0;
  double mass = 0.0;
  for (std::size_t c = 0; c < cur.size(); ++c) {
    const double kap = cur[c].channel.kappa();
    const auto& Fm = prev[c].F;
    const auto& F0 = cur[c].F;
    const auto& Fp = next[c].F;
    const auto& Gm = prev[c].G;
    const auto& G0 = cur[c].G;
    const auto& Gp = next[c].G;
    for (int i = 2; i < grid.n() - 1; ++i) {
      const double r = grid.node(i);
      if (r < region.r_lo || r > region.r_hi) continue;
      const auto ii = static_cast<std::size_t>(i);
      const double a = field.params.a0(r);
      const double ap = field.params.a0_derivative(r);
      const cplx g = 0.5 * (G0[ii - 1] + G0[ii]);
      const cplx pf = -time_part(Fm[ii], F0[ii], Fp[ii], a) - m2 * F0[ii] +
                      second(grid.node(i - 1), r, grid.node(i + 1), F0[ii - 1], F0[ii], F0[ii + 1]) -
                      kap * (kap + 1.0) * F0[ii] / (r * r) + ap * g;
      const double w = grid.node_weight(i);
      res += w * std::norm(pf);
      mass += w * std::norm(F0[ii]);
    }
    for (int i = 1; i < grid.n() - 1; ++i) {
      const double r = grid.half(i);
      if (r < region.r_lo || r > region.r_hi) continue;
      const auto ii = static_cast<std::size_t>(i);
      const double a = field.params.a0(r);
      const double ap = field.params.a0_derivative(r);
      const cplx f = 0.5 * (F0[ii] + F0[ii + 1]);
      const cplx pg = -time_part(Gm[ii], G0[ii], Gp[ii], a) - m2 * G0[ii] +
                      second(grid.half(i - 1), r, grid.half(i + 1), G0[ii - 1], G0[ii], G0[ii + 1]) -
                      kap * (kap - 1.0) * G0[ii] / (r * r) - ap * f;
      const double w = grid.half_weight(i);
      res += w * std::norm(pg);
      mass += w * std::norm(G0[ii]);
    }
  }
  if (mass == 0.0) return 0.0;
  return std::sqrt(res / mass);
}

}  // namespace dcdiff
