#include <doctest.h>

#include <numbers>

#include "dcdiff/angular_channels.hpp"
#include "dcdiff/errors.hpp"
#include "oracles.hpp"

using namespace dcdiff;

namespace {

Spinor4 stack(const Spinor2& up, const Spinor2& dn) {
  Spinor4 s;
  s << up(0), up(1), dn(0), dn(1);
  return s;
}

std::vector<Spinor4> sample(const AngularGrid& grid, const std::function<Spinor4(const Direction&)>& f) {
  std::vector<Spinor4> out(grid.size());
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) out[grid.node(i, j)] = f(grid.direction(i, j));
  }
  return out;
}

}  // namespace

TEST_CASE("channel index validation") {
  CHECK_THROWS_AS(ChannelIndex(0, 1), ArgumentError);
  CHECK_THROWS_AS(ChannelIndex(1, 2), ArgumentError);
  CHECK_THROWS_AS(ChannelIndex(1, 3), ArgumentError);
  CHECK(ChannelIndex(-1, 1).l() == 0);
  CHECK(ChannelIndex(1, 1).l() == 1);
  CHECK(ChannelIndex(-3, 5).l() == 2);
  CHECK(ChannelIndex(2, -3).l_lower() == 1);
  CHECK(enumerate_channels(3).size() == 2 * (2 + 4 + 6));
  CHECK(enumerate_channels(3, true).size() == 12);
}

TEST_CASE("Omega_{-1,1/2} is constant") {
  auto g = oracle::rng(3);
  for (int n = 0; n < 10; ++n) {
    const Spinor2 o = spherical_spinor(ChannelIndex(-1, 1), Direction(oracle::random_unit(g)));
    CHECK(std::abs(o(0) - 1.0 / std::sqrt(4.0 * std::numbers::pi)) < 1e-15);
    CHECK(std::abs(o(1)) < 1e-15);
  }
}

TEST_CASE("spherical harmonics and spinors match the closed forms") {
  auto g = oracle::rng(5);
  for (int n = 0; n < 20; ++n) {
    const Direction d(oracle::random_unit(g));
    for (int l = 0; l <= 2; ++l) {
      for (int m = -l; m <= l; ++m) {
        CHECK(std::abs(spherical_harmonic(l, m, d.theta(), d.phi()) - oracle::ylm(l, m, d.theta(), d.phi())) <
              1e-14);
      }
    }
    for (int kappa : {-3, -2, -1, 1, 2}) {
      for (int two_mu = -(2 * std::abs(kappa) - 1); two_mu <= 2 * std::abs(kappa) - 1; two_mu += 2) {
        const auto [up, dn] = oracle::omega(kappa, 0.5 * two_mu, d.theta(), d.phi());
        const Spinor2 o = spherical_spinor(ChannelIndex(kappa, two_mu), d);
        CHECK(std::abs(o(0) - up) < 1e-14);
        CHECK(std::abs(o(1) - dn) < 1e-14);
      }
    }
  }
}

TEST_CASE("quadrature grid") {
  const AngularGrid grid(12);
  double total = 0.0;
  for (int i = 0; i < grid.n_theta(); ++i) total += grid.weight(i) * grid.n_phi();
  CHECK(total == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
  // Y_lm conj(Y_l'm') integrates exactly up to l + l' = 24
  for (auto [l1, m1, l2, m2] : {std::array{12, 3, 12, 3}, std::array{12, 3, 10, 3}, std::array{7, -2, 5, 1},
                                std::array{11, 0, 13, 0}}) {
    cplx s = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i) {
      for (int j = 0; j < grid.n_phi(); ++j) {
        s += grid.weight(i) * spherical_harmonic(l1, m1, grid.theta(i), grid.phi(j)) *
             std::conj(spherical_harmonic(l2, m2, grid.theta(i), grid.phi(j)));
      }
    }
    CHECK(std::abs(s - ((l1 == l2 && m1 == m2) ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("Omega orthonormality for |kappa| <= 4") {
  const AngularGrid grid(8);
  const auto chans = enumerate_channels(4);
  std::vector<std::vector<Spinor2>> vals;
  for (const auto& c : chans) {
    std::vector<Spinor2> v(grid.size());
    for (int i = 0; i < grid.n_theta(); ++i) {
      for (int j = 0; j < grid.n_phi(); ++j) v[grid.node(i, j)] = spherical_spinor(c, grid.direction(i, j));
    }
    vals.push_back(std::move(v));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < chans.size(); ++a) {
    for (std::size_t b = 0; b < chans.size(); ++b) {
      cplx s = 0.0;
      for (int i = 0; i < grid.n_theta(); ++i) {
        for (int j = 0; j < grid.n_phi(); ++j) {
          const auto q = grid.node(i, j);
          s += grid.weight(i) * vals[a][q].dot(vals[b][q]);
        }
      }
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("sigma_r Omega_{kappa mu} = -Omega_{-kappa mu}") {
  auto g = oracle::rng(17);
  for (int n = 0; n < 50; ++n) {
    const Direction d(oracle::random_unit(g));
    for (const auto& c : enumerate_channels(5)) {
      const Spinor2 lhs = sigma_r(d) * spherical_spinor(c, d);
      CHECK((lhs + spherical_spinor(c.flipped(), d)).norm() < 1e-13);
    }
  }
}

TEST_CASE("components of Omega are degree-l harmonics") {
  // project each component onto Y_lm of every degree; only l(kappa) survives
  const AngularGrid grid(10);
  for (const auto& c : enumerate_channels(4)) {
    for (int comp = 0; comp < 2; ++comp) {
      for (int l = 0; l <= 6; ++l) {
        double mass = 0.0;
        for (int m = -l; m <= l; ++m) {
          cplx s = 0.0;
          for (int i = 0; i < grid.n_theta(); ++i) {
            for (int j = 0; j < grid.n_phi(); ++j) {
              s += grid.weight(i) * spherical_spinor(c, grid.direction(i, j))(comp) *
                   std::conj(spherical_harmonic(l, m, grid.theta(i), grid.phi(j)));
            }
          }
          mass += std::norm(s);
        }
        if (l != c.l()) CHECK(mass < 1e-24);
      }
    }
  }
}

TEST_CASE("project and reconstruct") {
  const AngularGrid grid(10);
  SUBCASE("single basis vector") {
    const ChannelIndex ch(1, 1);
    const auto s = sample(grid, [&](const Direction& d) { return stack(spherical_spinor(ch, d), Spinor2::Zero()); });
    const auto c = project(s, grid, 5);
    for (const auto& [idx, pair] : c.channels()) {
      const cplx want = idx == ch ? 1.0 : 0.0;
      CHECK(std::abs(pair.a[0] - want) < 1e-13);
      CHECK(std::abs(pair.b[0]) < 1e-13);
    }
  }
  SUBCASE("zero field") {
    const std::vector<Spinor4> s(grid.size(), Spinor4::Zero());
    CHECK(project(s, grid, 5).squared_norm() == 0.0);
  }
  SUBCASE("random band-limited field round trip and Parseval") {
    auto g = oracle::rng(23);
    std::normal_distribution<double> n;
    ChannelCoefficients src;
    for (const auto& ch : enumerate_channels(4)) {
      src.at(ch).a = {cplx{n(g), n(g)}};
      src.at(ch).b = {cplx{n(g), n(g)}};
    }
    const auto f = reconstruct(src, grid);
    const auto back = project(f, grid, 5);
    double err = 0.0;
    double ref = 0.0;
    const auto f2 = reconstruct(back, grid);
    double l2 = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i) {
      for (int j = 0; j < grid.n_phi(); ++j) {
        const auto q = grid.node(i, j);
        err += (f2[q] - f[q]).squaredNorm();
        ref += f[q].squaredNorm();
        l2 += grid.weight(i) * f[q].squaredNorm();
      }
    }
    CHECK(std::sqrt(err / ref) < 1e-10);
    CHECK(l2 == doctest::Approx(src.squared_norm()).epsilon(1e-12));
    const Direction d = Direction::from_angles(0.3, 1.2);
    const Spinor4 direct = reconstruct_at(src, d);
    Spinor4 by_hand = Spinor4::Zero();
    for (const auto& [ch, p] : src.channels()) {
      by_hand += stack(p.a[0] * spherical_spinor(ch, d), p.b[0] * spherical_spinor(ch.flipped(), d));
    }
    CHECK((direct - by_hand).norm() < 1e-13);
  }
  SUBCASE("resolution limit is enforced") { CHECK_THROWS_AS((void)project({}, grid, 6), ConfigurationError); }
}

TEST_CASE("axisymmetric projection agrees with the full projection") {
  const AngularGrid grid(12);
  auto field = [](const Direction& d) {
    Spinor4 s;
    const double c = d.z();
    s << std::exp(-3.0 * (1.0 - c)), 0.2 * c, cplx{0.0, 0.1} * c * c, 0.0;
    return s;
  };
  const auto full = project(sample(grid, field), grid, 6);
  std::vector<Spinor4> rings;
  for (int i = 0; i < grid.n_theta(); ++i) rings.push_back(field(grid.direction(i, 0)));
  const auto axis = project_axisymmetric(rings, grid, 6);
  for (const auto& [ch, p] : full.channels()) {
    const ChannelPair* q = axis.find(ch);
    if (std::abs(ch.two_mu()) != 1) {
      CHECK(std::abs(p.a[0]) + std::abs(p.b[0]) < 1e-13);
      continue;
    }
    REQUIRE(q != nullptr);
    CHECK(std::abs(p.a[0] - q->a[0]) < 1e-13);
    CHECK(std::abs(p.b[0] - q->b[0]) < 1e-13);
  }
}

TEST_CASE("K, beta and Delta_theta act spectrally") {
  ChannelCoefficients c;
  c.at(ChannelIndex(1, 1)) = {{1.0}, {1.0}};
  c.at(ChannelIndex(-2, 1)) = {{1.0}, {0.0}};
  const auto k = apply_K(c);
  CHECK(k.find(ChannelIndex(1, 1))->a[0] == cplx(-1.0));
  CHECK(k.find(ChannelIndex(1, 1))->b[0] == cplx(-1.0));
  CHECK(k.find(ChannelIndex(-2, 1))->a[0] == cplx(2.0));
  CHECK(k.find(ChannelIndex(-2, 1))->b[0] == cplx(0.0));

  ChannelCoefficients e;
  e.at(ChannelIndex(-1, 1)) = {{1.0}, {0.0}};
  e.at(ChannelIndex(1, 1)) = {{1.0}, {0.0}};
  const auto lap = apply_angular_laplacian(e, 1);
  CHECK(lap.find(ChannelIndex(-1, 1))->a[0] == cplx(0.0));
  CHECK(lap.find(ChannelIndex(1, 1))->a[0] == cplx(2.0));

  // K^2 - beta K = Delta_theta blockwise for |kappa| <= 8
  auto g = oracle::rng(29);
  std::normal_distribution<double> n;
  ChannelCoefficients r;
  for (const auto& ch : enumerate_channels(8)) r.at(ch) = {{cplx{n(g), n(g)}}, {cplx{n(g), n(g)}}};
  const auto kk = apply_K(apply_K(r));
  const auto bk = apply_beta(apply_K(r));
  const auto dl = apply_angular_laplacian(r, 1);
  const auto back = apply_angular_laplacian(apply_angular_laplacian(r, -1, AngularForm::shifted), 1,
                                            AngularForm::shifted);
  const auto kd = apply_K(dl);
  const auto dk = apply_angular_laplacian(apply_K(r), 1);
  for (const auto& [ch, p] : r.channels()) {
    const double la = ch.l() * (ch.l() + 1.0);
    const double lb = ch.l_lower() * (ch.l_lower() + 1.0);
    CHECK(std::abs(kk.find(ch)->a[0] - bk.find(ch)->a[0] - dl.find(ch)->a[0]) < 1e-12 * (1.0 + la));
    CHECK(std::abs(kk.find(ch)->b[0] - bk.find(ch)->b[0] - dl.find(ch)->b[0]) < 1e-12 * (1.0 + lb));
    CHECK(std::abs(dl.find(ch)->a[0] - la * p.a[0]) < 1e-12 * (1.0 + la));
    CHECK(std::abs(back.find(ch)->a[0] - p.a[0]) < 1e-13 * std::abs(p.a[0]) + 1e-15);
    CHECK(std::abs(back.find(ch)->b[0] - p.b[0]) < 1e-13 * std::abs(p.b[0]) + 1e-15);
    CHECK(std::abs(kd.find(ch)->a[0] - dk.find(ch)->a[0]) <= 1e-13 * std::abs(dk.find(ch)->a[0]));
    CHECK(std::abs(kd.find(ch)->b[0] - dk.find(ch)->b[0]) <= 1e-13 * std::abs(dk.find(ch)->b[0]));
  }
  CHECK(angular_multiplier(16, -2, AngularForm::shifted) == doctest::Approx(1.0 / (273.0 * 273.0)));
}

TEST_CASE("(sigma.L + 1) Omega = -kappa Omega by finite differences") {
  // L = -i x cross grad acting on Omega(x / |x|), fourth-order central differences
  auto om = [](const ChannelIndex& ch, std::array<double, 3> x) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    return spherical_spinor(ch, Direction({x[0] / r, x[1] / r, x[2] / r}));
  };
  auto g = oracle::rng(31);
  const double e = 1e-3;
  for (int n = 0; n < 10; ++n) {
    const auto x = oracle::random_unit(g);
    for (const auto& ch : enumerate_channels(3)) {
      std::array<Spinor2, 3> grad;
      for (int k = 0; k < 3; ++k) {
        auto at = [&](double s) {
          auto y = x;
          y[static_cast<std::size_t>(k)] += s;
          return om(ch, y);
        };
        grad[static_cast<std::size_t>(k)] = (8.0 * (at(e) - at(-e)) - (at(2 * e) - at(-2 * e))) / (12.0 * e);
      }
      const cplx mi{0.0, -1.0};
      const std::array<Spinor2, 3> L = {mi * (x[1] * grad[2] - x[2] * grad[1]), mi * (x[2] * grad[0] - x[0] * grad[2]),
                                        mi * (x[0] * grad[1] - x[1] * grad[0])};
      const Spinor2 o = om(ch, x);
      const Spinor2 lhs = pauli(1) * L[0] + pauli(2) * L[1] + pauli(3) * L[2] + o;
      CHECK((lhs + double(ch.kappa()) * o).norm() < 1e-8);
    }
  }
}
