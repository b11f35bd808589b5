#include "dcdiff/wavefront_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "dcdiff/errors.hpp"

namespace dcdiff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Plane = std::vector<Spinor4>;  // (radius, angle), angle fastest

// First-derivative weights at x0 for arbitrary nodes (Fornberg's recursion).
std::vector<double> derivative_weights(double x0, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

Plane radial_derivative(const Plane& p, const std::vector<double>& radii, std::size_t n_q) {
  const std::size_t n_r = radii.size();
  Plane out(p.size(), Spinor4::Zero());
  if (n_r < 5) throw ArgumentError("radial derivative needs at least five radii");
  for (std::size_t i = 0; i < n_r; ++i) {
    const std::size_t lo = std::min(i >= 2 ? i - 2 : 0, n_r - 5);
    const auto w = derivative_weights(radii[i], std::span<const double>(radii).subspan(lo, 5));
    for (std::size_t q = 0; q < n_q; ++q) {
      Spinor4 acc = Spinor4::Zero();
      for (std::size_t j = 0; j < 5; ++j) acc += w[j] * p[(lo + j) * n_q + q];
      out[i * n_q + q] = acc;
    }
  }
  return out;
}

Plane image_plane(const SpacetimeField& f, std::size_t k, AngularImage img) {
  const std::size_t n = f.radii.size() * f.angles.size();
  const auto& src = f.image(img);
  return Plane(src.begin() + static_cast<std::ptrdiff_t>(k * n),
               src.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
}

class OperatorEvaluator {
 public:
  OperatorEvaluator(const SpacetimeField& f, FieldOperator op) : f_(f), op_(op) {}

  Plane eval(std::size_t k, int n) {
    if (n == 0) return image_plane(f_, k, AngularImage::field);
    const auto key = std::make_pair(k, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Plane out;
    switch (op_) {
      case FieldOperator::identity:
        out = eval(k, 0);
        break;
      case FieldOperator::angular_laplacian:
      case FieldOperator::kappa_K: {
        if (n > 2) throw ArgumentError("angular operators are stored up to the second power");
        const bool lap = op_ == FieldOperator::angular_laplacian;
        const AngularImage img = lap ? (n == 1 ? AngularImage::laplacian : AngularImage::laplacian2)
                                     : (n == 1 ? AngularImage::kappa_op : AngularImage::kappa_op2);
        out = image_plane(f_, k, img);
        break;
      }
      case FieldOperator::radial_derivative:
        out = radial_derivative(eval(k, n - 1), f_.radii, f_.angles.size());
        break;
      case FieldOperator::scaling_R:
        out = apply_R(k, n);
        break;
    }
    memo_.emplace(key, out);
    return out;
  }

 private:
  Plane apply_R(std::size_t k, int n) {
    if (k < 2 || k + 2 >= f_.times.size()) {
      throw ArgumentError("scaling field R needs two snapshots on each side of the probe time");
    }
    const int s = f_.steps[k + 1] - f_.steps[k];
    for (int j = -2; j <= 2; ++j) {
      if (f_.steps[k - 2 + static_cast<std::size_t>(j + 2)] - f_.steps[k] != j * s) {
        throw ArgumentError("scaling field R needs equally spaced snapshots");
      }
    }
    const double delta = s * f_.dt;
    const Plane pm2 = eval(k - 2, n - 1);
    const Plane pm1 = eval(k - 1, n - 1);
    const Plane p0 = eval(k, n - 1);
    const Plane pp1 = eval(k + 1, n - 1);
    const Plane pp2 = eval(k + 2, n - 1);
    const Plane dr = radial_derivative(p0, f_.radii, f_.angles.size());
    const double tau = f_.times[k] - f_.source.r0;
    const std::size_t n_q = f_.angles.size();
    Plane out(p0.size());
    for (std::size_t idx = 0; idx < p0.size(); ++idx) {
      const Spinor4 dt = (pm2[idx] - 8.0 * pm1[idx] + 8.0 * pp1[idx] - pp2[idx]) / (12.0 * delta);
      out[idx] = tau * dt + f_.radii[idx / n_q] * dr[idx];
    }
    return out;
  }

  const SpacetimeField& f_;
  FieldOperator op_;
  std::map<std::pair<std::size_t, int>, Plane> memo_;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_err = 0.0;
  double residual = 0.0;
  bool finite = true;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit fit;
  const auto n = static_cast<double>(x.size());
  for (double v : y) fit.finite = fit.finite && std::isfinite(v);
  if (!fit.finite) {
    fit.slope = fit.intercept = fit.slope_err = fit.residual = kNaN;
    return fit;
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += e * e;
    fit.residual = std::max(fit.residual, std::abs(e));
  }
  fit.slope_err = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  return fit;
}

double tube_peak(const std::vector<double>& amp, const std::vector<double>& radii, std::size_t n_q,
                 std::size_t q, double lo, double hi) {
  double best = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < lo || radii[i] > hi) continue;
    best = std::max(best, amp[i * n_q + q]);
  }
  return best;
}

bool same_angle(double a, double b) { return std::abs(a - b) < 1e-9; }

}  // namespace

// ---------------------------------------------------------------------------
// Geometry

std::vector<double> FrontGeometry::geometric_radii(double t, double theta) const {
  // |r e - y|^2 = t^2  =>  r = r0 cos(theta) +- sqrt(t^2 - r0^2 sin^2(theta))
  const double c = r0 * std::cos(theta);
  const double disc = t * t - r0 * r0 * std::sin(theta) * std::sin(theta);
  std::vector<double> out;
  if (disc < 0.0) return out;
  const double s = std::sqrt(disc);
  for (double r : {c - s, c + s}) {
    if (r > 0.0 && (out.empty() || std::abs(out.back() - r) > 1e-14)) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> FrontGeometry::diffracted_radius(double t) const {
  if (t > r0) return t - r0;
  return std::nullopt;
}

bool FrontGeometry::is_merged_ray(double theta) { return std::abs(theta - kPi) < 1e-9; }

const char* front_name(FrontKind k) { return k == FrontKind::G ? "G" : "D"; }

const char* operator_name(FieldOperator op) {
  switch (op) {
    case FieldOperator::identity:
      return "identity";
    case FieldOperator::scaling_R:
      return "R";
    case FieldOperator::angular_laplacian:
      return "Delta_theta";
    case FieldOperator::kappa_K:
      return "K";
    case FieldOperator::radial_derivative:
      return "d_r";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Front location

FrontScan locate_fronts(const SpacetimeField& field, std::size_t k, double rel_floor) {
  if (k >= field.times.size()) throw ArgumentError("locate_fronts: snapshot index out of range");
  const FrontGeometry geo{field.source.r0};
  const double t = field.times[k];
  const double h = field.source.h;
  const std::size_t n_r = field.radii.size();
  FrontScan scan{t, 0.0, {}, {}};
  for (std::size_t q = 0; q < field.angles.size(); ++q) {
    const double theta = field.angles[q];
    std::vector<double> amp(n_r);
    for (std::size_t i = 0; i < n_r; ++i) amp[i] = field.at(k, i, q).norm();
    // The median is taken outside the light cone of the source, where only
    // numerical noise lives; inside, the smooth Coulomb tail would swamp it.
    const auto g_roots = geo.geometric_radii(t, theta);
    const double outer = g_roots.empty() ? 0.0 : g_roots.back();
    const double cone = outer + 5.0 * h + 2.0 * field.grid->spacing_at(outer);
    std::vector<double> sorted;
    for (std::size_t i = 0; i < n_r; ++i) {
      if (field.radii[i] > cone) sorted.push_back(amp[i]);
    }
    if (sorted.size() < 8) sorted = amp;
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
    const double median = sorted[mid];
    const double peak = *std::max_element(amp.begin(), amp.end());
    const double floor = std::max(10.0 * median, rel_floor * peak);
    scan.noise_floor = std::max(scan.noise_floor, floor);

    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < n_r; ++i) {
      if (amp[i] > floor && amp[i] > amp[i - 1] && amp[i] >= amp[i + 1]) maxima.push_back(i);
    }
    struct Expected {
      FrontKind kind;
      double r;
    };
    std::vector<Expected> expected;
    for (double r : g_roots) expected.push_back({FrontKind::G, r});
    if (auto rd = geo.diffracted_radius(t)) expected.push_back({FrontKind::D, *rd});

    std::vector<bool> explained(maxima.size(), false);
    for (const auto& e : expected) {
      FrontLocation loc{e.kind, theta, e.r, kNaN, 0.0, 0.0, false, false};
      loc.tolerance = 5.0 * h + 2.0 * field.grid->spacing_at(e.r);
      loc.merged = e.kind == FrontKind::D && FrontGeometry::is_merged_ray(theta);
      for (std::size_t j = 0; j < maxima.size(); ++j) {
        const double r = field.radii[maxima[j]];
        if (std::abs(r - e.r) > loc.tolerance) continue;
        explained[j] = true;
        if (amp[maxima[j]] > loc.amplitude) {
          loc.amplitude = amp[maxima[j]];
          loc.measured = r;
          loc.present = true;
        }
      }
      scan.fronts.push_back(loc);
    }
    for (std::size_t j = 0; j < maxima.size(); ++j) {
      if (!explained[j]) scan.unexplained.emplace_back(theta, field.radii[maxima[j]]);
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Operators

std::vector<double> operator_amplitude(const SpacetimeField& field, std::size_t k, FieldOperator op,
                                       int applications) {
  if (applications < 0) throw ArgumentError("operator_amplitude: negative application count");
  if (k >= field.times.size()) throw ArgumentError("operator_amplitude: snapshot index out of range");
  OperatorEvaluator ev(field, op);
  const Plane p = ev.eval(k, op == FieldOperator::identity ? 0 : applications);
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i].norm();
  return out;
}

// ---------------------------------------------------------------------------
// Exponents

const FrontFit* FrontReport::find(FrontKind kind, double theta) const {
  for (const auto& f : fits) {
    if (f.kind == kind && same_angle(f.theta, theta)) return &f;
  }
  return nullptr;
}

const ExponentGap* FrontReport::gap(double theta) const {
  for (const auto& g : gaps) {
    if (same_angle(g.theta, theta)) return &g;
  }
  return nullptr;
}

FrontReport smoothing_exponent(std::span<const SpacetimeField> family, double t, const ProbeOptions& opt,
                               FieldOperator op, int applications) {
  if (family.size() < 4) throw ArgumentError("smoothing_exponent: need at least 4 family members");
  const SpacetimeField& ref = family.front();
  for (std::size_t j = 1; j < family.size(); ++j) {
    const SpacetimeField& f = family[j];
    if (std::abs(family[j - 1].source.h / f.source.h - 2.0) > 1e-9) {
      throw ArgumentError("smoothing_exponent: h values must halve from member to member");
    }
    if (f.params.Z != ref.params.Z || f.params.m != ref.params.m || f.source.r0 != ref.source.r0 ||
        f.angles != ref.angles || f.smoothing_power != ref.smoothing_power) {
      throw ArgumentError("smoothing_exponent: family members differ in physics or probe rays");
    }
  }
  const FrontGeometry geo{ref.source.r0};
  const std::size_t n_q = ref.angles.size();
  FrontReport report;
  report.t = t;
  report.op = op;
  report.applications = applications;
  std::vector<FrontFit> g_fits(n_q);
  std::vector<FrontFit> d_fits(n_q);
  for (std::size_t q = 0; q < n_q; ++q) {
    g_fits[q].kind = FrontKind::G;
    d_fits[q].kind = FrontKind::D;
    g_fits[q].theta = d_fits[q].theta = ref.angles[q];
  }
  for (const auto& f : family) {
    const auto k = f.find_time(t);
    if (!k) throw ArgumentError("smoothing_exponent: probe time is not a snapshot of every member");
    const double tk = f.times[*k];
    const double half = 0.5 * opt.tube_width * f.source.h;
    const auto amp = operator_amplitude(f, *k, op, applications);
    for (std::size_t q = 0; q < n_q; ++q) {
      const double theta = f.angles[q];
      const auto roots = geo.geometric_radii(tk, theta);
      if (!roots.empty()) {
        const double rg = roots.back();
        g_fits[q].h.push_back(f.source.h);
        g_fits[q].tube_lo.push_back(rg - half);
        g_fits[q].tube_hi.push_back(rg + half);
        g_fits[q].amplitude.push_back(tube_peak(amp, f.radii, n_q, q, rg - half, rg + half));
      }
      const auto rd = geo.diffracted_radius(tk);
      if (rd && !FrontGeometry::is_merged_ray(theta)) {
        d_fits[q].h.push_back(f.source.h);
        d_fits[q].tube_lo.push_back(*rd - half);
        d_fits[q].tube_hi.push_back(*rd + half);
        d_fits[q].amplitude.push_back(tube_peak(amp, f.radii, n_q, q, *rd - half, *rd + half));
      }
    }
  }
  auto finish = [&](FrontFit& fit) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t j = 0; j < fit.h.size(); ++j) {
      x.push_back(std::log2(fit.h[j]));
      y.push_back(fit.amplitude[j] > 0.0 ? std::log2(fit.amplitude[j]) : -std::numeric_limits<double>::infinity());
    }
    const auto lf = least_squares(x, y);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.slope_err = lf.slope_err;
    fit.residual = lf.residual;
    fit.inconclusive = !lf.finite || !(lf.residual <= opt.residual_limit);
  };
  for (std::size_t q = 0; q < n_q; ++q) {
    const bool has_g = g_fits[q].h.size() == family.size();
    const bool has_d = d_fits[q].h.size() == family.size();
    if (has_g) {
      finish(g_fits[q]);
      report.fits.push_back(g_fits[q]);
    }
    if (has_d) {
      finish(d_fits[q]);
      report.fits.push_back(d_fits[q]);
    }
    if (has_g && has_d) {
      report.gaps.push_back({ref.angles[q], d_fits[q].slope - g_fits[q].slope,
                             std::hypot(d_fits[q].slope_err, g_fits[q].slope_err),
                             g_fits[q].inconclusive || d_fits[q].inconclusive});
    }
  }
  return report;
}

std::vector<ConormalResult> conormal_test(std::span<const SpacetimeField> family, double t,
                                          std::span<const FieldOperator> ops, const ProbeOptions& opt,
                                          int max_applications) {
  const FrontReport base = smoothing_exponent(family, t, opt);
  std::vector<ConormalResult> out;
  for (FieldOperator op : ops) {
    for (int n = 1; n <= max_applications; ++n) {
      const FrontReport rep = smoothing_exponent(family, t, opt, op, n);
      for (const auto& fit : rep.fits) {
        if (fit.kind != FrontKind::D) continue;
        const FrontFit* b = base.find(FrontKind::D, fit.theta);
        if (!b) continue;
        out.push_back({op, n, fit.theta, fit.slope, fit.slope - b->slope, fit.inconclusive || b->inconclusive});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Families

void validate_family(const FamilySpec& spec) {
  if (spec.h_values.empty()) throw ConfigurationError("family: h list is empty");
  for (std::size_t j = 0; j < spec.h_values.size(); ++j) {
    if (!(spec.h_values[j] > 0.0)) throw ConfigurationError("family: h values must be positive");
    if (j > 0 && std::abs(spec.h_values[j - 1] / spec.h_values[j] - 2.0) > 1e-9) {
      throw ConfigurationError("family: h list must be dyadic and strictly decreasing by factor 2");
    }
  }
  if (spec.n_r < 64) throw ConfigurationError("family: n_r must be at least 64");
  if (spec.k_max < 1) throw ConfigurationError("family: k_max must be at least 1");
  if (!(spec.dt > 0.0)) throw ConfigurationError("family: dt must be positive");
  if (spec.stencil_steps < 1 || spec.stencil_half < 0) throw ConfigurationError("family: invalid stencil layout");
  const double h_max = spec.h_values.front();
  const double t_first = spec.probe_time - spec.stencil_half * spec.stencil_steps * spec.dt;
  const double t_last = spec.probe_time + spec.stencil_half * spec.stencil_steps * spec.dt;
  if (!(t_first >= 0.0)) throw ConfigurationError("family: stencil reaches negative times");
  double t_max = t_last;
  for (double t : spec.extra_times) {
    if (!(t >= 0.0)) throw ConfigurationError("family: snapshot times must be non-negative");
    t_max = std::max(t_max, t);
  }
  if (spec.r_max < spec.base.source.r0 + t_max + 10.0 * h_max) {
    throw ConfigurationError("family: r_max must be at least r0 + t_final + 10 h_max");
  }
}

SimulationRequest member_request(const FamilySpec& spec, std::size_t member, int smoothing_power) {
  validate_family(spec);
  if (member >= spec.h_values.size()) throw ArgumentError("member_request: member index out of range");
  const double h = spec.h_values[member];
  const double scale = spec.h_values.front() / h;
  SimulationRequest req = spec.base;
  req.source.h = h;
  req.grid = std::make_shared<const RadialGrid>(static_cast<int>(std::lround(spec.n_r * scale)), spec.r_max,
                                                spec.grading);
  req.k_max = static_cast<int>(std::lround(spec.k_max * scale));
  req.dt = spec.dt / scale;
  req.smoothing_power = smoothing_power;
  std::vector<long> steps;
  for (int j = -spec.stencil_half; j <= spec.stencil_half; ++j) {
    steps.push_back(std::lround(spec.probe_time / req.dt) + static_cast<long>(j) * spec.stencil_steps);
  }
  for (double t : spec.extra_times) steps.push_back(std::lround(t / req.dt));
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  req.times.clear();
  for (long n : steps) req.times.push_back(static_cast<double>(n) * req.dt);
  req.diagnostic_times.clear();
  if (spec.leak_audit) req.diagnostic_times.push_back(req.times.back());
  return req;
}

std::vector<SpacetimeField> simulate_family(const FamilySpec& spec, int smoothing_power) {
  validate_family(spec);
  std::vector<SpacetimeField> out;
  out.reserve(spec.h_values.size());
  for (std::size_t j = 0; j < spec.h_values.size(); ++j) {
    out.push_back(fundamental_solution(member_request(spec, j, smoothing_power)));
  }
  return out;
}

namespace {

NonfocusingEntry tail_entry(const ChannelStates& data, const RadialGrid& grid, int n, int tail_kappa, double tail0) {
  if (n < 0) throw ArgumentError("nonfocusing: smoothing powers must be non-negative");
  NonfocusingEntry e{n, 0.0, 0.0, kNaN, kNaN, true};
  e.tail_mass = shell_mass(smooth_angular(data, n), grid, tail_kappa);
  e.tail_ratio = tail0 > 0.0 ? e.tail_mass / tail0 : kNaN;
  return e;
}

void fill_exponent(NonfocusingEntry& e, std::span<const SpacetimeField> fam, const FamilySpec& spec, double theta,
                   const ProbeOptions& opt) {
  const FrontReport r = smoothing_exponent(fam, spec.probe_time, opt);
  if (const FrontFit* d = r.find(FrontKind::D, theta)) {
    e.s_D = d->slope;
    e.s_D_err = d->slope_err;
    e.inconclusive = d->inconclusive;
  }
}

}  // namespace

NonfocusingReport nonfocusing_probe(const FamilySpec& spec, std::span<const int> powers, double theta,
                                    int tail_kappa, const std::vector<SpacetimeField>* baseline,
                                    const ProbeOptions& opt) {
  validate_family(spec);
  if (spec.k_max < tail_kappa) throw ConfigurationError("nonfocusing_probe: k_max below the tail channel");
  NonfocusingReport rep{tail_kappa, theta, {}};
  const SimulationRequest first = member_request(spec, 0, 0);
  const ChannelStates data = build_initial_data(first.source, *first.grid, first.k_max);
  const double tail0 = shell_mass(data, *first.grid, tail_kappa);
  for (int n : powers) {
    NonfocusingEntry e = tail_entry(data, *first.grid, n, tail_kappa, tail0);
    if (n == 0 && baseline) {
      fill_exponent(e, *baseline, spec, theta, opt);
    } else {
      const std::vector<SpacetimeField> fam = simulate_family(spec, n);
      fill_exponent(e, fam, spec, theta, opt);
    }
    rep.entries.push_back(e);
  }
  return rep;
}

NonfocusingReport nonfocusing_report(const FamilySpec& spec, std::span<const int> powers,
                                     std::span<const std::vector<SpacetimeField>> families, double theta,
                                     int tail_kappa, const ProbeOptions& opt) {
  validate_family(spec);
  if (spec.k_max < tail_kappa) throw ConfigurationError("nonfocusing_report: k_max below the tail channel");
  if (families.size() != powers.size()) throw ArgumentError("nonfocusing_report: one family per power");
  NonfocusingReport rep{tail_kappa, theta, {}};
  const SimulationRequest first = member_request(spec, 0, 0);
  const ChannelStates data = build_initial_data(first.source, *first.grid, first.k_max);
  const double tail0 = shell_mass(data, *first.grid, tail_kappa);
  for (std::size_t j = 0; j < powers.size(); ++j) {
    NonfocusingEntry e = tail_entry(data, *first.grid, powers[j], tail_kappa, tail0);
    fill_exponent(e, families[j], spec, theta, opt);
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace dcdiff
