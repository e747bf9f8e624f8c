#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "dynwave/dirichlet.hpp"
#include "dynwave/errors.hpp"
#include "dynwave/grid.hpp"
#include "oracles.hpp"

using namespace dynwave;

TEST_CASE("closed form: lambda = 0 is the linear interpolant, exactly") {
  Grid g(64);
  auto d = dirichlet_closed_form(0.0, {0.3, -0.2}, g);
  for (int i = 0; i <= g.n_cells; ++i) {
    const double s = g.node(i);
    CHECK(d.profile.values[i] == doctest::Approx(0.3 * (1.0 - s) - 0.2 * s).epsilon(1e-15));
  }
  CHECK(d.profile.values[0] == 0.3);
  CHECK(d.profile.values[g.n_cells] == -0.2);
}

TEST_CASE("closed form: lambda = 1 agrees with the naive sinh formula") {
  // Oracle route: textbook sinh expression evaluated directly (safe at mu = 1).
  Grid g(100);
  auto d = dirichlet_closed_form(1.0, {1.0, 0.5}, g);
  for (int i = 0; i <= g.n_cells; ++i) {
    const double s = g.node(i);
    const double want = (std::sinh(1.0 - s) + 0.5 * std::sinh(s)) / std::sinh(1.0);
    CHECK(d.profile.values[i] == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("closed form: lambda = 1e6 does not overflow and decays like exp(-mu s)") {
  Grid g(200);
  auto d = dirichlet_closed_form(1e6, {1.0, 0.0}, g);
  for (double v : d.profile.values) CHECK(std::isfinite(v));
  CHECK(d.profile.values[0] == 1.0);
  // mu = 1000; at s = 0.01 the profile is exp(-10) up to exponentially small terms.
  const int i = g.n_cells / 100;
  CHECK(d.profile.values[i] == doctest::Approx(std::exp(-1000.0 * g.node(i))).epsilon(1e-9));
}

TEST_CASE("closed form: lambda = -5 agrees with the naive sin formula") {
  Grid g(100);
  const double sg = std::sqrt(5.0);
  auto d = dirichlet_closed_form(-5.0, {-0.4, 1.1}, g);
  for (int i = 0; i <= g.n_cells; ++i) {
    const double s = g.node(i);
    const double want = (-0.4 * std::sin(sg * (1.0 - s)) + 1.1 * std::sin(sg * s)) / std::sin(sg);
    CHECK(d.profile.values[i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("closed form: lambda -> 0 limit is continuous") {
  Grid g(80);
  auto near = dirichlet_closed_form(1e-10, {0.7, -0.9}, g);
  auto zero = dirichlet_closed_form(0.0, {0.7, -0.9}, g);
  for (int i = 0; i <= g.n_cells; ++i)
    CHECK(std::fabs(near.profile.values[i] - zero.profile.values[i]) <= 1e-8);
}

TEST_CASE("closed form satisfies the ODE: second-difference residual is O(h^2)") {
  Grid g(200);
  const double lambda = 10.0;
  auto d = dirichlet_closed_form(lambda, {1.0, -1.0}, g);
  const auto& u = d.profile.values;
  double worst = 0.0;
  for (int i = 1; i < g.n_cells; ++i) {
    const double upp = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (g.h * g.h);
    worst = std::max(worst, std::fabs(lambda * u[i] - upp));
  }
  // residual ~ h^2/12 * u'''' = h^2 lambda^2 / 12 * u; |u| <= ~1 here
  CHECK(worst <= 5e-4);
}

TEST_CASE("pole guard: lambda within 1e-8 of -k^2 pi^2 raises, nearby values do not") {
  Grid g(50);
  const double pi2 = M_PI * M_PI;
  CHECK_THROWS_AS(dirichlet_closed_form(-pi2 + 1e-9, {1, 0}, g), SingularityError);
  CHECK_THROWS_AS(dirichlet_closed_form(-4.0 * pi2 - 5e-9, {1, 0}, g), SingularityError);
  CHECK_NOTHROW(dirichlet_closed_form(-pi2 + 1e-3, {1, 0}, g));
  CHECK_NOTHROW(dirichlet_closed_form(-0.5, {1, 0}, g));
}

TEST_CASE("discrete lift matches the closed form at O(h^2) for several lambda") {
  const BoundaryPair y{0.8, -0.3};
  for (double lambda : {-5.0, 0.5, 1.0, 10.0}) {
    Grid g200(200), g400(400);
    auto cf200 = dirichlet_closed_form(lambda, y, g200);
    auto dd200 = discrete_dirichlet(lambda, y, g200);
    double e200 = 0.0;
    for (int i = 0; i <= 200; ++i)
      e200 = std::max(e200, std::fabs(cf200.profile.values[i] - dd200.profile.values[i]));
    CHECK(e200 <= 1e-3);

    auto cf400 = dirichlet_closed_form(lambda, y, g400);
    auto dd400 = discrete_dirichlet(lambda, y, g400);
    double e400 = 0.0;
    for (int i = 0; i <= 400; ++i)
      e400 = std::max(e400, std::fabs(cf400.profile.values[i] - dd400.profile.values[i]));
    // second-order convergence: halving h divides the defect by ~4
    if (e200 > 1e-12) {
      const double order = oracle::observed_order(e200, e400);
      CHECK(order > 1.5);
      CHECK(order < 2.6);
    }
  }
}

TEST_CASE("discrete lift with q,r: stencil backward error at roundoff, endpoints exact") {
  Grid g(150);
  GridFunction q = GridFunction::sample(g, [](double x) { return 0.4 * std::sin(2.0 * x); });
  GridFunction r = GridFunction::sample(g, [](double x) { return -0.8 + 0.3 * x; });
  const double lambda = 2.5;
  auto d = discrete_dirichlet(lambda, {1.0, 2.0}, g, q, r);
  CHECK(d.profile.values[0] == 1.0);
  CHECK(d.profile.values[g.n_cells] == 2.0);

  const auto& u = d.profile.values;
  const double ih2 = 1.0 / (g.h * g.h);
  double worst = 0.0, scale = 0.0;
  for (int i = 1; i < g.n_cells; ++i) {
    const double au = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * ih2 +
                      q.values[i] * (u[i + 1] - u[i - 1]) / (2.0 * g.h) + r.values[i] * u[i];
    worst = std::max(worst, std::fabs(lambda * u[i] - au));
    scale = std::max(scale, std::fabs(u[i]) * ih2);
  }
  CHECK(worst <= 1e-11 * scale);
}

TEST_CASE("discrete lift: exactly singular system raises a singularity error") {
  // r_i = 2/h^2 with lambda = 0 zeroes the first pivot exactly.
  Grid g(32);
  GridFunction q = GridFunction::zero(g);
  GridFunction r = GridFunction::zero(g);
  for (auto& v : r.values) v = 2.0 / (g.h * g.h);
  CHECK_THROWS_AS(discrete_dirichlet(0.0, {1.0, 0.0}, g, q, r), SingularityError);
}

TEST_CASE("dirichlet_norm: p = 2 value matches the boundary-layer asymptotic") {
  Grid g(200);
  // Exact vertex norm: ||sinh(mu s)/sinh(mu)||_2 = sqrt(sinh(2mu)/(4mu) - 1/2)/sinh(mu),
  // which for mu >> 1 is (2 mu)^(-1/2) up to exponentially small terms.
  const double lam = 1e4, mu = 100.0;
  const double want = 1.0 / std::sqrt(2.0 * mu);
  const double got = dirichlet_norm(lam, 2.0, g, 32, 0);
  CHECK(got == doctest::Approx(want).epsilon(2e-3));
}

TEST_CASE("dirichlet_norm: p = 1 value matches 1/mu asymptotic") {
  Grid g(200);
  // ||exp(-mu s)||_1 -> 1/mu for mu >> 1.
  const double lam = 1e4, mu = 100.0;
  const double got = dirichlet_norm(lam, 1.0, g, 32, 0);
  CHECK(got == doctest::Approx(1.0 / mu).epsilon(2e-3));
}

TEST_CASE("dirichlet_norm is nonincreasing in lambda for p in {1,2,4}") {
  Grid g(200);
  for (double p : {1.0, 2.0, 4.0}) {
    double prev = 0.0;
    bool first = true;
    for (double lam : {1e2, 1e3, 1e4, 1e5}) {
      const double cur = dirichlet_norm(lam, p, g, 32, 0);
      if (!first) CHECK(cur <= prev * (1.0 + 1e-12));
      prev = cur;
      first = false;
    }
  }
}

TEST_CASE("dirichlet_norm: seeded runs are reproducible") {
  Grid g(100);
  const double a = dirichlet_norm(1e3, 2.0, g, 40, 7);
  const double b = dirichlet_norm(1e3, 2.0, g, 40, 7);
  CHECK(a == b);
}

TEST_CASE("dirichlet_norm argument validation") {
  Grid g(50);
  CHECK_THROWS_AS(dirichlet_norm(-1.0, 2.0, g), ArgumentError);
  CHECK_THROWS_AS(dirichlet_norm(0.0, 2.0, g), ArgumentError);
  CHECK_THROWS_AS(dirichlet_norm(10.0, 0.5, g), ArgumentError);
  CHECK_THROWS_AS(dirichlet_norm(10.0, 2.0, g, 7), ArgumentError);
}

TEST_CASE("decay exponent: slope is -1/(2p) within 0.02 for p in {1,2,4}") {
  Grid g(200);
  const std::vector<double> lams{1e2, 1e3, 1e4, 1e5};
  for (double p : {1.0, 2.0, 4.0}) {
    const double slope = decay_exponent_fit(p, lams, g);
    CHECK(std::fabs(slope - (-0.5 / p)) <= 0.02);
  }
}

TEST_CASE("decay exponent: cross-check the slope against an in-test log-log fit") {
  Grid g(200);
  const std::vector<double> lams{1e2, 1e3, 1e4, 1e5};
  std::vector<double> lx, ly;
  for (double lam : lams) {
    lx.push_back(std::log(lam));
    ly.push_back(std::log(dirichlet_norm(lam, 2.0, g, 32, 0)));
  }
  const double oracle_slope = oracle::ls_slope(lx, ly);
  CHECK(decay_exponent_fit(2.0, lams, g) == doctest::Approx(oracle_slope).epsilon(1e-12));
}

TEST_CASE("decay exponent argument validation") {
  Grid g(50);
  CHECK_THROWS_AS(decay_exponent_fit(2.0, {1.0, 2.0}, g), ArgumentError);
  CHECK_THROWS_AS(decay_exponent_fit(2.0, {2.0, 1.0, 3.0}, g), ArgumentError);
  CHECK_THROWS_AS(decay_exponent_fit(2.0, {-1.0, 1.0, 2.0}, g), ArgumentError);
}
