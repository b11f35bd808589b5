#include <doctest.h>

#include <cmath>

#include "dcdiff/errors.hpp"
#include "dcdiff/wavefront_probe.hpp"
#include "oracles.hpp"

using namespace dcdiff;

namespace {

// Field on one ray built from two bumps: h^-2 exp(-x^2/2) on G and
// d_scale * h^-1 x exp(-x^2/2) on D, x the distance to the front in units of h.
SpacetimeField synthetic_member(double h, double theta, double d_scale = 1.0) {
  SpacetimeField f;
  f.source.r0 = 1.0;
  f.source.h = h;
  f.grid = std::make_shared<const RadialGrid>(4096, 4.6, 2.0);
  f.dt = h / 16;  // snapshot spacing h / 8, as in a real family
  f.angles = {theta};
  for (int i = 1; i < f.grid->n(); ++i) f.radii.push_back(f.grid->node(i));
  for (int k = 0; k < 9; ++k) {
    f.steps.push_back(static_cast<int>(std::lround(2.5 / f.dt)) + 2 * (k - 4));
    f.times.push_back(f.steps.back() * f.dt);
  }
  f.allocate();
  const FrontGeometry geo{1.0};
  for (std::size_t k = 0; k < f.times.size(); ++k) {
    const double t = f.times[k];
    const double rg = geo.geometric_radii(t, theta).back();
    const double rd = *geo.diffracted_radius(t);
    for (std::size_t i = 0; i < f.radii.size(); ++i) {
      const double xg = (f.radii[i] - rg) / h;
      const double xd = (f.radii[i] - rd) / h;
      const double v = std::exp(-0.5 * xg * xg) / (h * h) + d_scale * xd * std::exp(-0.5 * xd * xd) / h;
      f.at(k, i, 0) = Spinor4(v, 0.0, 0.0, 0.0);
    }
  }
  return f;
}

std::vector<SpacetimeField> synthetic_family(double theta, double kink = 1.0) {
  std::vector<SpacetimeField> fam;
  for (int j = 0; j < 4; ++j) fam.push_back(synthetic_member(0.1 / (1 << j), theta, j == 2 ? kink : 1.0));
  return fam;
}

}  // namespace

TEST_CASE("front geometry") {
  const FrontGeometry geo{1.0};
  auto g = geo.geometric_radii(2.0, 0.0);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == doctest::Approx(3.0));
  g = geo.geometric_radii(2.0, oracle::pi / 2);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == doctest::Approx(std::sqrt(3.0)));
  g = geo.geometric_radii(2.0, oracle::pi);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == doctest::Approx(1.0));
  // before t0 the sphere misses the origin and meets the forward ray twice
  g = geo.geometric_radii(0.5, 0.0);
  REQUIRE(g.size() == 2);
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == doctest::Approx(1.5));
  CHECK(geo.geometric_radii(0.5, oracle::pi / 2).empty());
  CHECK(*geo.diffracted_radius(2.0) == doctest::Approx(1.0));
  CHECK_FALSE(geo.diffracted_radius(0.5).has_value());
  CHECK(FrontGeometry::is_merged_ray(oracle::pi));
  CHECK_FALSE(FrontGeometry::is_merged_ray(3.0));
}

TEST_CASE("synthetic family recovers the planted exponents") {
  const auto fam = synthetic_family(oracle::pi / 2);
  const auto rep = smoothing_exponent(fam, 2.5);
  const FrontFit* g = rep.find(FrontKind::G, oracle::pi / 2);
  const FrontFit* d = rep.find(FrontKind::D, oracle::pi / 2);
  REQUIRE(g);
  REQUIRE(d);
  CHECK(g->slope == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(d->slope == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK_FALSE(g->inconclusive);
  CHECK_FALSE(d->inconclusive);
  const ExponentGap* gap = rep.gap(oracle::pi / 2);
  REQUIRE(gap);
  CHECK(gap->delta_s == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_FALSE(gap->inconclusive);
}

TEST_CASE("a member off the power law marks the fit inconclusive") {
  const auto fam = synthetic_family(oracle::pi / 2, 1.6);
  const auto rep = smoothing_exponent(fam, 2.5);
  CHECK(rep.find(FrontKind::D, oracle::pi / 2)->inconclusive);
  CHECK_FALSE(rep.find(FrontKind::G, oracle::pi / 2)->inconclusive);
  CHECK(rep.gap(oracle::pi / 2)->inconclusive);
}

TEST_CASE("operator orders on a synthetic conormal front") {
  // R is tangent to D and keeps the order; D_r costs one power of h.
  const auto fam = synthetic_family(oracle::pi / 2);
  const FieldOperator ops[] = {FieldOperator::scaling_R, FieldOperator::radial_derivative};
  const auto res = conormal_test(fam, 2.5, ops);
  REQUIRE(res.size() == 2);
  CHECK(res[0].op == FieldOperator::scaling_R);
  CHECK(std::abs(res[0].delta) < 0.02);
  CHECK(res[1].delta == doctest::Approx(-1.0).epsilon(0.02));
  CHECK_FALSE(res[0].inconclusive);
  CHECK_FALSE(res[1].inconclusive);
}

TEST_CASE("locate_fronts on a synthetic field") {
  const auto f = synthetic_member(0.05, oracle::pi / 2);
  const auto scan = locate_fronts(f, 4);
  REQUIRE(scan.fronts.size() == 2);
  for (const auto& loc : scan.fronts) {
    CHECK(loc.present);
    CHECK(std::abs(loc.measured - loc.expected) <= loc.tolerance);
  }
  CHECK(scan.fronts[1].kind == FrontKind::D);
  // x exp(-x^2/2) peaks one width outside the front
  CHECK(std::abs(std::abs(scan.fronts[1].measured - 1.5) - 0.05) < 2e-3);
  CHECK(scan.unexplained.empty());
}

TEST_CASE("family validation and member scaling") {
  FamilySpec spec;
  spec.h_values = {0.1, 0.05, 0.025, 0.0125};
  spec.probe_time = 2.5;
  spec.extra_times = {0.5, 1.0};
  CHECK_NOTHROW(validate_family(spec));
  const auto req = member_request(spec, 2, 1);
  CHECK(req.source.h == 0.025);
  CHECK(req.grid->n() == 2048);
  CHECK(req.k_max == 144);
  CHECK(req.dt == doctest::Approx(0.00625 / 4));
  CHECK(req.smoothing_power == 1);
  REQUIRE(req.times.size() == 11);
  CHECK(req.times[0] == doctest::Approx(0.5));
  CHECK(req.times[6] == doctest::Approx(2.5));
  CHECK(req.times[7] - req.times[6] == doctest::Approx(2 * req.dt));
  CHECK_THROWS_AS((void)member_request(spec, 4, 0), ArgumentError);

  auto bad = spec;
  bad.h_values = {0.1, 0.04};
  CHECK_THROWS_AS(validate_family(bad), ConfigurationError);
  bad = spec;
  bad.r_max = 4.0;
  CHECK_THROWS_AS(validate_family(bad), ConfigurationError);
  bad = spec;
  bad.probe_time = 0.01;
  CHECK_THROWS_AS(validate_family(bad), ConfigurationError);
  bad = spec;
  bad.extra_times = {-1.0};
  CHECK_THROWS_AS(validate_family(bad), ConfigurationError);
}

TEST_CASE("diffracted front appears only with a Coulomb centre") {
  SimulationRequest req;
  req.source.h = 0.1;
  req.grid = std::make_shared<const RadialGrid>(768, 6.0, 2.0);
  req.k_max = 36;
  req.dt = 0.0125;
  req.times = {2.5};
  req.probe_angles = {oracle::pi / 2};
  // Without the Coulomb centre the massless field is carried by G alone; the
  // interior holds only truncation ripple, far below the diffracted front.
  double d_amp[2] = {0.0, 0.0};
  for (int j = 0; j < 2; ++j) {
    req.params.Z = j == 0 ? 0.0 : 0.4;
    const auto f = fundamental_solution(req);
    const auto scan = locate_fronts(f, 0);
    for (const auto& loc : scan.fronts) {
      if (loc.kind == FrontKind::G) CHECK(loc.present);
      if (loc.kind == FrontKind::D) d_amp[j] = loc.amplitude;
    }
    MESSAGE("Z=" << req.params.Z << " D amplitude " << d_amp[j]);
  }
  CHECK(d_amp[1] > 0.0);
  CHECK(d_amp[0] < 0.05 * d_amp[1]);
}

TEST_CASE("nonfocusing report argument checks") {
  FamilySpec spec;
  spec.h_values = {0.1, 0.05, 0.025, 0.0125};
  const int powers[] = {0, 1};
  std::vector<std::vector<SpacetimeField>> fams(1);
  CHECK_THROWS_AS((void)nonfocusing_report(spec, powers, fams, oracle::pi / 2), ArgumentError);
  CHECK_THROWS_AS((void)nonfocusing_report(spec, powers, fams, oracle::pi / 2, 40), ConfigurationError);
}
