#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "dynwave/dirichlet.hpp"
#include "dynwave/errors.hpp"
#include "dynwave/spectral.hpp"
#include "oracles.hpp"

using namespace dynwave;

namespace {

OperatorMatrix raw_matrix(const std::vector<std::vector<double>>& rows) {
  OperatorMatrix m;
  m.dofs.coupling = Coupling::Trace;
  m.dofs.n_cells = static_cast<int>(rows.size()) - 1;
  m.dofs.dim = static_cast<int>(rows.size());
  for (const auto& r : rows)
    for (double v : r) m.entries.push_back(v);
  return m;
}

// closed-form spectrum of the Dirichlet second-difference matrix on n cells
std::vector<double> dirichlet_tridiag_spectrum(int n) {
  std::vector<double> out;
  const double h = 1.0 / n;
  for (int k = 1; k < n; ++k) {
    const double s = std::sin(0.5 * k * M_PI * h);
    out.push_back(-4.0 / (h * h) * s * s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("assemble: trace-mode entries match the stencil by hand") {
  Grid g(10);
  const double h = g.h, ih2 = 1.0 / (h * h);
  ProblemSpec spec(g);
  spec.alpha0 = 1.0;
  spec.alpha1 = -1.0;
  spec.beta0 = -1.0;
  spec.beta1 = -2.0;
  for (int i = 0; i <= 10; ++i) {
    spec.q_coef.values[i] = 0.3;
    spec.r_coef.values[i] = -0.7;
  }
  auto m = assemble(spec, g);
  CHECK(m.dofs.dim == 11);

  // interior row 4
  CHECK(m.at(4, 3) == doctest::Approx(ih2 - 0.3 / (2 * h)).epsilon(1e-15));
  CHECK(m.at(4, 4) == doctest::Approx(-2 * ih2 - 0.7).epsilon(1e-15));
  CHECK(m.at(4, 5) == doctest::Approx(ih2 + 0.3 / (2 * h)).epsilon(1e-15));
  CHECK(m.at(4, 6) == 0.0);

  // boundary rows: one-sided second-order derivative stencils
  CHECK(m.at(0, 0) == doctest::Approx(-1.0 - 3.0 / (2 * h)).epsilon(1e-15));
  CHECK(m.at(0, 1) == doctest::Approx(2.0 / h).epsilon(1e-15));
  CHECK(m.at(0, 2) == doctest::Approx(-1.0 / (2 * h)).epsilon(1e-15));
  CHECK(m.at(10, 10) == doctest::Approx(-2.0 - 3.0 / (2 * h)).epsilon(1e-15));
  CHECK(m.at(10, 9) == doctest::Approx(2.0 / h).epsilon(1e-15));
  CHECK(m.at(10, 8) == doctest::Approx(-1.0 / (2 * h)).epsilon(1e-15));
}

TEST_CASE("assemble: boundary rows apply one-sided derivatives consistently") {
  // The boundary row of the assembled matrix evaluated on samples of a smooth
  // u must reproduce alpha d/dn u + beta u at the endpoint, O(h^2).
  Grid g(400);
  ProblemSpec spec(g);
  spec.alpha0 = 1.0;
  spec.alpha1 = -1.0;
  spec.beta0 = -1.0;
  spec.beta1 = -1.0;
  auto m = assemble(spec, g);
  auto u = GridFunction::sample(g, [](double x) { return std::sin(1.3 * x) + 0.2 * x * x; });
  auto du = [](double x) { return 1.3 * std::cos(1.3 * x) + 0.4 * x; };

  double row0 = 0.0, rowN = 0.0;
  for (int j = 0; j <= g.n_cells; ++j) {
    row0 += m.at(0, j) * u.values[j];
    rowN += m.at(g.n_cells, j) * u.values[j];
  }
  // Analytic comparison limited by the O(h^2) truncation of the one-sided
  // stencil (u''' ~ 2.2 here => ~5e-6 absolute at N=400).
  CHECK(row0 == doctest::Approx(1.0 * du(0.0) - 1.0 * u.values[0]).epsilon(1e-5));
  CHECK(rowN == doctest::Approx(-1.0 * du(1.0) - 1.0 * u.values[g.n_cells]).epsilon(1e-5));
  // Against the discrete one-sided derivative the row is exact by construction.
  CHECK(row0 == doctest::Approx(1.0 * one_sided_derivative(u, Side::Left) - 1.0 * u.values[0])
                    .epsilon(1e-12));
  CHECK(rowN == doctest::Approx(-1.0 * one_sided_derivative(u, Side::Right) - 1.0 * u.values[g.n_cells])
                    .epsilon(1e-12));
}

TEST_CASE("assemble: normal-derivative mode layout and ghost elimination") {
  Grid g(8);
  const double h = g.h, ih2 = 1.0 / (h * h);
  ProblemSpec spec(g);
  spec.coupling = Coupling::NormalDerivative;
  spec.ac_q0 = -4.0;
  spec.ac_q1 = -9.0;
  for (int i = 0; i <= 8; ++i) spec.q_coef.values[i] = 0.5;
  auto m = assemble(spec, g);
  CHECK(m.dofs.dim == 11); // 9 nodes + 2 fluxes
  CHECK(m.dofs.flux0() == 9);
  CHECK(m.dofs.flux1() == 10);

  // Row 0 after eliminating the ghost with u'(0) = -delta_0:
  CHECK(m.at(0, 0) == doctest::Approx(-2.0 * ih2).epsilon(1e-15));
  CHECK(m.at(0, 1) == doctest::Approx(2.0 * ih2).epsilon(1e-15));
  CHECK(m.at(0, 9) == doctest::Approx(2.0 / h - 0.5).epsilon(1e-15));
  // Row N with u'(1) = delta_1:
  CHECK(m.at(8, 8) == doctest::Approx(-2.0 * ih2).epsilon(1e-15));
  CHECK(m.at(8, 7) == doctest::Approx(2.0 * ih2).epsilon(1e-15));
  CHECK(m.at(8, 10) == doctest::Approx(2.0 / h + 0.5).epsilon(1e-15));
  // Flux rows
  CHECK(m.at(9, 9) == -4.0);
  CHECK(m.at(10, 10) == -9.0);
  CHECK(m.at(9, 0) == 0.0);
}

TEST_CASE("assemble validation") {
  Grid g(10), g2(12);
  ProblemSpec spec(g);
  CHECK_THROWS_AS(assemble(spec, g2), ArgumentError);
  spec.alpha0 = std::nan("");
  CHECK_THROWS_AS(assemble(spec, g), ArgumentError);
  ProblemSpec spec2(g);
  spec2.lp_exponent = 0.5;
  CHECK_THROWS_AS(assemble(spec2, g), ArgumentError);
}

TEST_CASE("eigs: hand-checkable matrices") {
  auto m = raw_matrix({{3.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 2.0}});
  auto ev = eigs(m);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].real() == doctest::Approx(1.0));
  CHECK(ev[1].real() == doctest::Approx(2.0));
  CHECK(ev[2].real() == doctest::Approx(3.0));

  // rotation-like block: eigenvalues are a conjugate pair, sorted by imag
  auto r = raw_matrix({{0.0, 1.0}, {-4.0, 0.0}});
  auto evr = eigs(r);
  REQUIRE(evr.size() == 2);
  CHECK(evr[0].real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(evr[0].imag() == doctest::Approx(-2.0));
  CHECK(evr[1].imag() == doctest::Approx(2.0));
}

TEST_CASE("eigs: decoupled trace matrix has Dirichlet spectrum plus double zero") {
  Grid g(100);
  ProblemSpec spec(g); // alpha = beta = 0
  auto ev = eigs(assemble(spec, g));
  REQUIRE(static_cast<int>(ev.size()) == 101);

  int zeros = 0;
  std::vector<double> negative;
  for (const auto& z : ev) {
    CHECK(std::fabs(z.imag()) <= 1e-8 * std::max(1.0, std::fabs(z.real())));
    if (std::fabs(z.real()) <= 1e-6)
      ++zeros;
    else
      negative.push_back(z.real());
  }
  CHECK(zeros == 2);

  auto want = dirichlet_tridiag_spectrum(100);
  REQUIRE(negative.size() == want.size());
  std::sort(negative.begin(), negative.end());
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(negative[i] == doctest::Approx(want[i]).epsilon(1e-8));
}

TEST_CASE("eigs: invariant under similarity transforms") {
  const int n = 6;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = std::sin(1.0 + 3.0 * i + j) + (i == j ? 2.0 * i : 0.0);
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) += 0.05 * std::cos(2.0 * i - j);

  Eigen::MatrixXd b = t.inverse() * a * t;
  OperatorMatrix ma, mb;
  ma.dofs.dim = mb.dofs.dim = n;
  ma.dofs.n_cells = mb.dofs.n_cells = n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ma.entries.push_back(a(i, j));
      mb.entries.push_back(b(i, j));
    }
  auto ea = eigs(ma), eb = eigs(mb);
  REQUIRE(ea.size() == eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) {
    CHECK(ea[i].real() == doctest::Approx(eb[i].real()).epsilon(1e-8));
    CHECK(ea[i].imag() == doctest::Approx(eb[i].imag()).epsilon(1e-8));
  }
}

TEST_CASE("slowest_real_modes agrees with the full dense eigenpair solve") {
  Grid g(60);
  ProblemSpec spec(g);
  spec.alpha0 = 1.0;
  spec.alpha1 = -1.0;
  spec.beta0 = -1.0;
  spec.beta1 = -1.0;
  auto m = assemble(spec, g);
  auto full = real_eigenpairs(m);
  auto fast = slowest_real_modes(m, 2);
  REQUIRE(full.size() >= 2);
  REQUIRE(fast.size() == 2);
  for (int p = 0; p < 2; ++p) {
    CHECK(fast[static_cast<std::size_t>(p)].first ==
          doctest::Approx(full[static_cast<std::size_t>(p)].first).epsilon(1e-9));
    const auto& va = fast[static_cast<std::size_t>(p)].second;
    const auto& vb = full[static_cast<std::size_t>(p)].second;
    REQUIRE(va.size() == vb.size());
    // Compare up to overall sign: the largest-entry-positive convention can
    // break either way for antisymmetric modes, whose extremal entries come
    // in equal-magnitude opposite-sign pairs.
    double dot = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) dot += va[i] * vb[i];
    const double sgn = dot < 0.0 ? -1.0 : 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i)
      worst = std::max(worst, std::fabs(va[i] - sgn * vb[i]));
    CHECK(worst <= 1e-8);
  }
  CHECK_THROWS_AS(slowest_real_modes(m, 0), ArgumentError);
}

TEST_CASE("real_eigenpairs: residual and normalization") {
  Grid g(60);
  ProblemSpec spec(g);
  spec.alpha0 = 1.0;
  spec.alpha1 = -1.0;
  spec.beta0 = -1.0;
  spec.beta1 = -1.0;
  auto m = assemble(spec, g);
  auto pairs = real_eigenpairs(m);
  REQUIRE(pairs.size() >= 2);
  CHECK(pairs[0].first > pairs[1].first); // sorted closest-to-zero first

  for (int p = 0; p < 2; ++p) {
    const auto& [lam, vec] = pairs[static_cast<std::size_t>(p)];
    double nrm = 0.0, maxabs = 0.0, maxsgn = 0.0;
    for (double v : vec) {
      nrm += v * v;
      if (std::fabs(v) > maxabs) {
        maxabs = std::fabs(v);
        maxsgn = v;
      }
    }
    CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(maxsgn > 0.0);

    // residual ||Mv - lam v|| small relative to matrix scale
    double res = 0.0;
    for (int i = 0; i < m.dofs.dim; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m.dofs.dim; ++j) acc += m.at(i, j) * vec[static_cast<std::size_t>(j)];
      res = std::max(res, std::fabs(acc - lam * vec[static_cast<std::size_t>(i)]));
    }
    CHECK(res <= 1e-7 * (4.0 / (g.h * g.h)));
  }
}

TEST_CASE("b_lambda: decoupled and diagonal cases are exact") {
  Grid g(50);
  ProblemSpec spec(g); // alpha = 0
  spec.beta0 = -1.0;
  spec.beta1 = -2.0;
  auto b = b_lambda(1.0, spec, g);
  CHECK(b.a00 == -1.0);
  CHECK(b.a11 == -2.0);
  CHECK(b.a01 == 0.0);
  CHECK(b.a10 == 0.0);
}

TEST_CASE("b_lambda: analytic entries at lambda = 1 for alpha = (1,-1)") {
  Grid g(400);
  ProblemSpec spec(g);
  spec.alpha0 = 1.0;
  spec.alpha1 = -1.0;
  auto b = b_lambda(1.0, spec, g);
  const double coth1 = std::cosh(1.0) / std::sinh(1.0);
  const double csch1 = 1.0 / std::sinh(1.0);
  CHECK(b.a00 == doctest::Approx(-coth1).epsilon(1e-4));
  CHECK(b.a01 == doctest::Approx(csch1).epsilon(1e-4));
  CHECK(b.a10 == doctest::Approx(csch1).epsilon(1e-4));
  CHECK(b.a11 == doctest::Approx(-coth1).epsilon(1e-4));
}

TEST_CASE("b_lambda: lambda -> 0 limit") {
  Grid g(200);
  ProblemSpec spec(g);
  spec.alpha0 = 1.0;
  spec.alpha1 = -1.0;
  auto b = b_lambda(1e-9, spec, g);
  CHECK(b.a00 == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(b.a01 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.a10 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.a11 == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("char_eval: pinned values and pole guard") {
  CHECK(char_eval(0.0, 0.0, 0.0) == 0.0);
  // lambda = -1: sg = 1, c = cot(1); value is 1 - (1 + 2 cot 1) = -2 cot 1
  const double want = -2.0 * std::cos(1.0) / std::sin(1.0);
  CHECK(char_eval(-1.0, 0.0, 0.0) == doctest::Approx(want).epsilon(1e-14));

  const double near_pole = -(M_PI - 1e-9) * (M_PI - 1e-9);
  CHECK_THROWS_AS(char_eval(near_pole, 0.0, 0.0), SingularityError);
  CHECK_NOTHROW(char_eval(-M_PI * M_PI + 1e-3, 0.0, 0.0));
  CHECK_THROWS_AS(char_eval(std::nan(""), 0.0, 0.0), ArgumentError);
}

TEST_CASE("char_eval equals det(lambda - B_lambda) up to O(h^2)") {
  // Dual route: analytic characteristic function vs the determinant of the
  // discrete boundary block, for several lambda and beta.
  for (double beta : {0.0, -1.0}) {
    for (double lambda : {-5.0, -2.0, -0.5, 0.5, 1.0}) {
      Grid g200(200), g400(400);
      ProblemSpec s200(g200), s400(g400);
      for (ProblemSpec* s : {&s200, &s400}) {
        s->alpha0 = 1.0;
        s->alpha1 = -1.0;
        s->beta0 = beta;
        s->beta1 = beta;
      }
      const double want = char_eval(lambda, beta, beta);
      const double e200 = std::fabs(b_lambda(lambda, s200, g200).det_shifted(lambda) - want);
      const double e400 = std::fabs(b_lambda(lambda, s400, g400).det_shifted(lambda) - want);
      CHECK(e200 <= 2e-2);
      if (e200 > 1e-10) {
        const double order = oracle::observed_order(e200, e400);
        CHECK(order > 1.4);
        CHECK(order < 2.6);
      }
    }
  }
}

TEST_CASE("char_roots: beta = 0 roots satisfy lambda = -(1 + 2 sg cot sg)") {
  auto roots = char_roots(0.0, 0.0, -50.0, -0.05);
  REQUIRE(roots.size() == 3); // one root per branch below sqrt(50)
  for (std::size_t i = 1; i < roots.size(); ++i) CHECK(roots[i] > roots[i - 1]);
  for (double r : roots) {
    const double sg = std::sqrt(-r);
    const double c = sg * std::cos(sg) / std::sin(sg);
    CHECK(std::fabs(r + 1.0 + 2.0 * c) <= 1e-6);
    CHECK(std::fabs(char_eval(r, 0.0, 0.0)) <= 1e-6);
  }
}

TEST_CASE("char_roots: lambda_max = 0 includes the zero root for beta = 0") {
  auto roots = char_roots(0.0, 0.0, -50.0, 0.0);
  REQUIRE(roots.size() == 4);
  CHECK(std::fabs(roots.back()) <= 1e-12);
}

TEST_CASE("char_roots: window validation") {
  CHECK_THROWS_AS(char_roots(0.0, 0.0, -1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(char_roots(0.0, 0.0, -1.0, -2.0), ArgumentError);
}

TEST_CASE("char_roots match eigenvalues of the assembled matrix under refinement") {
  // Roots of the characteristic function approximate eigenvalues of the
  // discretized coupled operator at O(h^2).
  auto roots = char_roots(-1.0, -1.0, -20.0, -0.05);
  REQUIRE(!roots.empty());

  auto nearest = [](const std::vector<std::complex<double>>& ev, double x) {
    double best = 1e300;
    for (const auto& z : ev)
      if (std::fabs(z.imag()) < 1e-6 * std::max(1.0, std::fabs(z.real())))
        best = std::min(best, std::fabs(z.real() - x));
    return best;
  };

  Grid g200(200), g400(400);
  ProblemSpec s200(g200), s400(g400);
  for (ProblemSpec* s : {&s200, &s400}) {
    s->alpha0 = 1.0;
    s->alpha1 = -1.0;
    s->beta0 = -1.0;
    s->beta1 = -1.0;
  }
  auto e200 = eigs(assemble(s200, g200));
  auto e400 = eigs(assemble(s400, g400));
  for (double r : roots) {
    const double d200 = nearest(e200, r);
    const double d400 = nearest(e400, r);
    CHECK(d200 <= 0.05);
    CHECK(d400 <= 0.3 * d200 + 1e-7);
  }
}

TEST_CASE("factorization residual is at roundoff level for several configs") {
  Grid g(200);

  ProblemSpec plain(g); // alpha = beta = 0
  ProblemSpec coupled(g);
  coupled.alpha0 = 1.0;
  coupled.alpha1 = -1.0;
  coupled.beta0 = -1.0;
  coupled.beta1 = -1.0;
  ProblemSpec skewed(g);
  skewed.alpha0 = 0.7;
  skewed.alpha1 = -0.3;
  skewed.beta0 = -0.5;
  skewed.beta1 = -2.0;
  for (int i = 0; i <= g.n_cells; ++i) {
    skewed.q_coef.values[i] = 0.4;
    skewed.r_coef.values[i] = -0.8;
  }

  for (const ProblemSpec* s : {&plain, &coupled, &skewed}) {
    for (double lambda : {0.5, 1.0, -2.0}) {
      CHECK(factorization_residual(lambda, *s, g) <= 1e-10);
    }
  }
}

TEST_CASE("factorization residual: pole guard and coupling guard") {
  Grid g(100);
  ProblemSpec spec(g);
  CHECK_THROWS_AS(factorization_residual(-M_PI * M_PI + 1e-10, spec, g), SingularityError);
  ProblemSpec ac(g);
  ac.coupling = Coupling::NormalDerivative;
  CHECK_THROWS_AS(factorization_residual(1.0, ac, g), ArgumentError);
}

TEST_CASE("dissipative trace configuration has a real spectrum") {
  Grid g(200);
  ProblemSpec spec(g);
  spec.alpha0 = 1.0;
  spec.alpha1 = -1.0;
  spec.beta0 = -1.0;
  spec.beta1 = -1.0;
  auto ev = eigs(assemble(spec, g));
  for (const auto& z : ev) {
    CHECK(std::fabs(z.imag()) <= 1e-8 * std::max(1.0, std::fabs(z.real())));
    CHECK(z.real() <= 1e-9);
  }
}

TEST_CASE("spectral_equivalence_check: decoupled case has no window roots") {
  Grid g(100);
  ProblemSpec spec(g); // B = 0 exactly, det(lambda - B_lambda) = lambda^2
  auto report = spectral_equivalence_check(spec, g);
  CHECK(report.matched_eigenvalues.empty());
  CHECK(report.roots.empty());
  CHECK(!report.gamma_periodic.has_value());
  CHECK(report.eigenvalues.size() == 101);
}

TEST_CASE("spectral_equivalence_check: coupled case aligns roots and eigenvalues") {
  Grid g(200);
  ProblemSpec spec(g);
  spec.alpha0 = 1.0;
  spec.alpha1 = -1.0;
  spec.beta0 = -1.0;
  spec.beta1 = -1.0;
  auto report = spectral_equivalence_check(spec, g, -20.0, -0.05);
  REQUIRE(!report.roots.empty());
  REQUIRE(report.roots.size() == report.root_to_eig_distance.size());
  REQUIRE(report.matched_eigenvalues.size() == report.match_residuals.size());
  for (double r : report.roots) CHECK(std::fabs(char_eval(r, -1.0, -1.0)) <= 1e-6);
  for (double d : report.root_to_eig_distance) CHECK(d <= 0.05);
  for (double x : report.matched_eigenvalues) {
    CHECK(x >= -20.0);
    CHECK(x <= -0.05);
  }
}

TEST_CASE("periodicity_condition_check") {
  const double pi2 = M_PI * M_PI;
  CHECK(periodicity_condition_check({-pi2, -4.0 * pi2}, 2.0, 1e-9));
  CHECK(!periodicity_condition_check({-pi2 - 1e-3}, 2.0, 1e-6));
  // gamma = 4: omega^2 = (pi/2)^2
  const double o2 = 0.25 * pi2;
  CHECK(periodicity_condition_check({-o2, -4.0 * o2, -9.0 * o2}, 4.0, 1e-9));
  CHECK(!periodicity_condition_check({0.0}, 2.0, 1e-9, false));
  CHECK(periodicity_condition_check({0.0}, 2.0, 1e-9, true));
  CHECK(periodicity_condition_check({}, 2.0, 1e-9));
  CHECK_THROWS_AS(periodicity_condition_check({-1.0}, 0.0, 1e-9), ArgumentError);
}
