#include "dynwave/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "dynwave/dirichlet.hpp"
#include "dynwave/errors.hpp"

namespace dynwave {

namespace {

void validate_spec(const ProblemSpec& spec, const Grid& grid) {
  if (!(spec.grid() == grid) || !(spec.r_coef.grid == grid))
    throw ArgumentError("problem spec coefficients live on a different grid");
  if (!(spec.lp_exponent >= 1.0) || !std::isfinite(spec.lp_exponent))
    throw ArgumentError("lp_exponent must be a finite value >= 1");
  const double scalars[] = {spec.alpha0, spec.alpha1, spec.beta0,   spec.beta1,
                            spec.damp_c0, spec.damp_c1, spec.damp_ct0, spec.damp_ct1,
                            spec.ac_p0,  spec.ac_p1,  spec.ac_q0,  spec.ac_q1,
                            spec.ac_r0,  spec.ac_r1};
  for (double s : scalars)
    if (!std::isfinite(s)) throw ArgumentError("problem spec has a non-finite coefficient");
}

bool is_cr_model(const ProblemSpec& spec) {
  if (spec.coupling != Coupling::Trace) return false;
  if (spec.alpha0 != 1.0 || spec.alpha1 != -1.0) return false;
  for (double v : spec.q_coef.values)
    if (v != 0.0) return false;
  for (double v : spec.r_coef.values)
    if (v != 0.0) return false;
  return true;
}

// Sign-change scan with bisection refinement over [lo, hi], skipping a pad
// around each listed pole. Roots are returned sorted and deduplicated.
std::vector<double> scan_real_roots(const std::function<double(double)>& f, double lo,
                                    double hi, const std::vector<double>& poles,
                                    double pad) {
  const double step = 0.01 * M_PI * M_PI;

  // Split [lo, hi] at pole exclusion zones.
  std::vector<std::pair<double, double>> segments;
  double cur = lo;
  std::vector<double> ps = poles;
  std::sort(ps.begin(), ps.end());
  for (double p : ps) {
    if (p + pad <= cur || p - pad >= hi) continue;
    if (p - pad > cur) segments.emplace_back(cur, p - pad);
    cur = std::max(cur, p + pad);
  }
  if (cur < hi) segments.emplace_back(cur, hi);

  std::vector<double> roots;
  for (auto [a, b] : segments) {
    double x0 = a, f0 = f(x0);
    if (f0 == 0.0) roots.push_back(x0);
    while (x0 < b) {
      double x1 = std::min(x0 + step, b);
      double f1 = f(x1);
      if (f1 == 0.0) {
        roots.push_back(x1);
      } else if (f0 != 0.0 && ((f0 < 0.0) != (f1 < 0.0))) {
        double lo_b = x0, hi_b = x1, flo = f0;
        for (int it = 0; it < 80 && hi_b - lo_b > 1e-10; ++it) {
          const double mid = 0.5 * (lo_b + hi_b);
          const double fm = f(mid);
          if (fm == 0.0) {
            lo_b = hi_b = mid;
            break;
          }
          if ((flo < 0.0) == (fm < 0.0)) {
            lo_b = mid;
            flo = fm;
          } else {
            hi_b = mid;
          }
        }
        roots.push_back(0.5 * (lo_b + hi_b));
      }
      x0 = x1;
      f0 = f1;
    }
  }

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
              roots.end());
  return roots;
}

std::vector<double> dirichlet_poles_in(double lo, double hi) {
  std::vector<double> ps;
  for (int k = 1;; ++k) {
    const double p = -(k * M_PI) * (k * M_PI);
    if (p < lo - 1.0) break;
    if (p <= hi + 1.0) ps.push_back(p);
  }
  return ps;
}

double pole_distance(double lambda) {
  if (lambda >= 0.0) return lambda + M_PI * M_PI; // nearest pole is -pi^2
  const double sg = std::sqrt(-lambda);
  const double k = std::max(1.0, std::round(sg / M_PI));
  double best = std::fabs(lambda + k * M_PI * k * M_PI);
  for (double kk : {k - 1.0, k + 1.0}) {
    if (kk >= 1.0) best = std::min(best, std::fabs(lambda + kk * M_PI * kk * M_PI));
  }
  return best;
}

} // namespace

OperatorMatrix assemble(const ProblemSpec& spec, const Grid& grid) {
  validate_spec(spec, grid);
  const int n = grid.n_cells;
  const double h = grid.h;
  const double ih2 = 1.0 / (h * h);

  OperatorMatrix m;
  m.dofs.coupling = spec.coupling;
  m.dofs.n_cells = n;
  m.dofs.dim = (spec.coupling == Coupling::Trace) ? n + 1 : n + 3;
  m.entries.assign(static_cast<std::size_t>(m.dofs.dim) * m.dofs.dim, 0.0);
  const int dim = m.dofs.dim;
  auto at = [&](int i, int j) -> double& {
    return m.entries[static_cast<std::size_t>(i) * dim + j];
  };

  // Interior wave rows are shared by both couplings.
  for (int i = 1; i < n; ++i) {
    const double qs = spec.q_coef.values[i] / (2.0 * h);
    at(i, i - 1) = ih2 - qs;
    at(i, i) = -2.0 * ih2 + spec.r_coef.values[i];
    at(i, i + 1) = ih2 + qs;
  }

  if (spec.coupling == Coupling::Trace) {
    // x''_j = alpha_j d/dn u(j) + beta_j x_j with one-sided 2nd-order stencils.
    at(0, 0) = spec.beta0 - 3.0 * spec.alpha0 / (2.0 * h);
    at(0, 1) = 2.0 * spec.alpha0 / h;
    at(0, 2) = -spec.alpha0 / (2.0 * h);
    at(n, n) = spec.beta1 + 3.0 * spec.alpha1 / (2.0 * h);
    at(n, n - 1) = -2.0 * spec.alpha1 / h;
    at(n, n - 2) = spec.alpha1 / (2.0 * h);
  } else {
    // Boundary wave rows eliminate the ghost node via the flux unknowns:
    // u'(0) = -delta_0 gives u_{-1} = u_1 + 2h delta_0; u'(1) = delta_1 gives
    // u_{N+1} = u_{N-1} + 2h delta_1.
    const double q0 = spec.q_coef.values[0];
    const double qn = spec.q_coef.values[n];
    at(0, 0) = -2.0 * ih2 + spec.r_coef.values[0];
    at(0, 1) = 2.0 * ih2;
    at(0, m.dofs.flux0()) = 2.0 / h - q0;
    at(n, n) = -2.0 * ih2 + spec.r_coef.values[n];
    at(n, n - 1) = 2.0 * ih2;
    at(n, m.dofs.flux1()) = 2.0 / h + qn;
    // Flux rows carry only their own restoring coefficient; the velocity
    // couplings ac_p, ac_r act on velocities and live in the integrator.
    at(m.dofs.flux0(), m.dofs.flux0()) = spec.ac_q0;
    at(m.dofs.flux1(), m.dofs.flux1()) = spec.ac_q1;
  }
  m.refresh_support();
  return m;
}

std::vector<std::complex<double>> eigs(const OperatorMatrix& m) {
  const int dim = m.dofs.dim;
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = m.at(i, j);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("dense eigensolver failed to converge");

  std::vector<std::complex<double>> out(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

std::vector<std::pair<double, std::vector<double>>> real_eigenpairs(const OperatorMatrix& m) {
  const int dim = m.dofs.dim;
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = m.at(i, j);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("dense eigensolver failed to converge");

  std::vector<std::pair<double, std::vector<double>>> pairs;
  for (int i = 0; i < dim; ++i) {
    const std::complex<double> ev = solver.eigenvalues()[i];
    if (std::fabs(ev.imag()) > 1e-8 * std::max(1.0, std::fabs(ev.real()))) continue;
    std::vector<double> vec(static_cast<std::size_t>(dim));
    double nrm2 = 0.0;
    int arg_max = 0;
    for (int j = 0; j < dim; ++j) {
      vec[static_cast<std::size_t>(j)] = solver.eigenvectors()(j, i).real();
      nrm2 += vec[static_cast<std::size_t>(j)] * vec[static_cast<std::size_t>(j)];
      if (std::fabs(vec[static_cast<std::size_t>(j)]) >
          std::fabs(vec[static_cast<std::size_t>(arg_max)]))
        arg_max = j;
    }
    const double scale =
        (vec[static_cast<std::size_t>(arg_max)] < 0.0 ? -1.0 : 1.0) / std::sqrt(nrm2);
    for (double& v : vec) v *= scale;
    pairs.emplace_back(ev.real(), std::move(vec));
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  return pairs;
}

std::vector<std::pair<double, std::vector<double>>> slowest_real_modes(const OperatorMatrix& m,
                                                                       int count) {
  if (count < 1) throw ArgumentError("slowest_real_modes: count must be positive");
  const int dim = m.dofs.dim;
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = m.at(i, j);

  // Eigenvalues come from the vector-free QR pass; the few wanted
  // eigenvectors are then recovered by shifted inverse iteration. Asking the
  // dense solver for all eigenvectors is prohibitively slow on this operator
  // (its spectrum clusters quadratically toward -4/h^2, which stalls the
  // eigenvector back-substitution), while one LU solve per mode is cheap.
  std::vector<double> shifts;
  for (const auto& ev : eigs(m)) {
    if (std::fabs(ev.imag()) > 1e-8 * std::max(1.0, std::fabs(ev.real()))) continue;
    shifts.push_back(ev.real());
  }
  std::sort(shifts.begin(), shifts.end(), std::greater<double>());
  if (static_cast<int>(shifts.size()) < count)
    throw NumericalError("slowest_real_modes: fewer real eigenvalues than requested");
  shifts.resize(static_cast<std::size_t>(count));

  const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  std::vector<std::pair<double, std::vector<double>>> out;
  for (double mu : shifts) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = unif(rng);
    v.normalize();
    double mu_hat = mu;
    double resid = std::numeric_limits<double>::infinity();
    bool perturbed = false;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(
        (a - mu * Eigen::MatrixXd::Identity(dim, dim)).eval());
    for (int it = 0; it < 20 && resid > 1e-13 * scale; ++it) {
      Eigen::VectorXd w = lu.solve(v);
      if (!w.allFinite() || w.norm() == 0.0) {
        // Shift sitting exactly on the eigenvalue: nudge it and refactor.
        if (perturbed) break;
        perturbed = true;
        const double nudged = mu + 1e-10 * std::max(1.0, std::fabs(mu));
        lu.compute((a - nudged * Eigen::MatrixXd::Identity(dim, dim)).eval());
        continue;
      }
      v = w.normalized();
      mu_hat = v.dot(a * v);
      resid = (a * v - mu_hat * v).norm();
    }
    if (!(resid <= 1e-10 * scale))
      throw NumericalError("slowest_real_modes: inverse iteration failed to converge");

    int arg_max = 0;
    for (int i = 0; i < dim; ++i)
      if (std::fabs(v[i]) > std::fabs(v[arg_max])) arg_max = i;
    if (v[arg_max] < 0.0) v = -v;
    out.emplace_back(mu_hat, std::vector<double>(v.data(), v.data() + dim));
  }
  return out;
}

BoundaryBlock b_lambda(double lambda, const ProblemSpec& spec, const Grid& grid) {
  validate_spec(spec, grid);
  if (spec.coupling != Coupling::Trace)
    throw ArgumentError("b_lambda is defined for the trace coupling");
  require_off_dirichlet_poles(lambda);

  const auto d0 = discrete_dirichlet(lambda, {1.0, 0.0}, grid, spec.q_coef, spec.r_coef);
  const auto d1 = discrete_dirichlet(lambda, {0.0, 1.0}, grid, spec.q_coef, spec.r_coef);

  BoundaryBlock b;
  b.a00 = spec.beta0 + spec.alpha0 * one_sided_derivative(d0.profile, Side::Left);
  b.a01 = spec.alpha0 * one_sided_derivative(d1.profile, Side::Left);
  b.a10 = spec.alpha1 * one_sided_derivative(d0.profile, Side::Right);
  b.a11 = spec.beta1 + spec.alpha1 * one_sided_derivative(d1.profile, Side::Right);
  return b;
}

double char_eval(double lambda, double beta0, double beta1) {
  if (!std::isfinite(lambda) || !std::isfinite(beta0) || !std::isfinite(beta1))
    throw ArgumentError("char_eval: non-finite input");

  double c;
  if (lambda > 0.0) {
    const double mu = std::sqrt(lambda);
    c = mu / std::tanh(mu);
  } else if (lambda == 0.0) {
    c = 1.0;
  } else {
    const double sg = std::sqrt(-lambda);
    const double k = std::round(sg / M_PI);
    if (k >= 1.0 && std::fabs(sg - k * M_PI) < 1e-8)
      throw SingularityError("char_eval: lambda = " + std::to_string(lambda) +
                             " is too close to a Dirichlet pole");
    c = sg * std::cos(sg) / std::sin(sg);
  }
  const double bsum = beta0 + beta1;
  return lambda * lambda + lambda * (1.0 + 2.0 * c - bsum) - bsum * c + beta0 * beta1;
}

std::vector<double> char_roots(double beta0, double beta1, double lambda_min,
                               double lambda_max) {
  if (!(lambda_min < lambda_max) || !(lambda_max <= 0.0))
    throw ArgumentError("char_roots: need lambda_min < lambda_max <= 0");
  auto f = [&](double x) { return char_eval(x, beta0, beta1); };
  return scan_real_roots(f, lambda_min, lambda_max,
                         dirichlet_poles_in(lambda_min, lambda_max), 1e-6);
}

double factorization_residual(double lambda, const ProblemSpec& spec, const Grid& grid) {
  validate_spec(spec, grid);
  if (spec.coupling != Coupling::Trace)
    throw ArgumentError("factorization_residual is defined for the trace coupling");
  require_off_dirichlet_poles(lambda);

  const int n = grid.n_cells;
  const int dim = n + 1;
  const double h = grid.h;
  const double ih2 = 1.0 / (h * h);

  const OperatorMatrix m = assemble(spec, grid);
  const auto d0 = discrete_dirichlet(lambda, {1.0, 0.0}, grid, spec.q_coef, spec.r_coef);
  const auto d1 = discrete_dirichlet(lambda, {0.0, 1.0}, grid, spec.q_coef, spec.r_coef);
  const BoundaryBlock bl = b_lambda(lambda, spec, grid);

  // L_lambda: identity, with interior rows subtracting the lifted boundary part.
  std::vector<double> lmat(static_cast<std::size_t>(dim) * dim, 0.0);
  std::vector<double> amat(static_cast<std::size_t>(dim) * dim, 0.0);
  auto lat = [&](int i, int j) -> double& {
    return lmat[static_cast<std::size_t>(i) * dim + j];
  };
  auto aat = [&](int i, int j) -> double& {
    return amat[static_cast<std::size_t>(i) * dim + j];
  };
  for (int i = 0; i < dim; ++i) lat(i, i) = 1.0;
  for (int i = 1; i < n; ++i) {
    lat(i, 0) = -d0.profile.values[i];
    lat(i, n) = -d1.profile.values[i];
  }

  // A_lambda: interior operator on interior columns, boundary block on the
  // trace columns, shifted by -lambda on the diagonal.
  for (int i = 1; i < n; ++i) {
    const double qs = spec.q_coef.values[i] / (2.0 * h);
    if (i - 1 >= 1) aat(i, i - 1) = ih2 - qs;
    aat(i, i) = -2.0 * ih2 + spec.r_coef.values[i] - lambda;
    if (i + 1 <= n - 1) aat(i, i + 1) = ih2 + qs;
  }
  aat(0, 0) = bl.a00 - lambda;
  aat(0, n) = bl.a01;
  aat(0, 1) = 2.0 * spec.alpha0 / h;
  aat(0, 2) = -spec.alpha0 / (2.0 * h);
  aat(n, n) = bl.a11 - lambda;
  aat(n, 0) = bl.a10;
  aat(n, n - 1) = -2.0 * spec.alpha1 / h;
  aat(n, n - 2) = spec.alpha1 / (2.0 * h);

  // residual = max | (M - lambda I) - A_lambda L_lambda |
  double worst = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double prod = 0.0;
      for (int k = 0; k < dim; ++k) prod += amat[static_cast<std::size_t>(i) * dim + k] *
                                            lmat[static_cast<std::size_t>(k) * dim + j];
      double want = m.at(i, j);
      if (i == j) want -= lambda;
      worst = std::max(worst, std::fabs(want - prod));
    }
  }
  return worst;
}

SpectralReport spectral_equivalence_check(const ProblemSpec& spec, const Grid& grid,
                                          double lambda_lo, double lambda_hi) {
  validate_spec(spec, grid);
  if (spec.coupling != Coupling::Trace)
    throw ArgumentError("spectral_equivalence_check is defined for the trace coupling");
  if (!(lambda_lo < lambda_hi) || !(lambda_hi <= 0.0))
    throw ArgumentError("spectral_equivalence_check: need lambda_lo < lambda_hi <= 0");

  SpectralReport report;
  const OperatorMatrix m = assemble(spec, grid);
  report.eigenvalues = eigs(m);

  const bool cr = is_cr_model(spec);
  auto residual_at = [&](double x) {
    if (cr) return char_eval(x, spec.beta0, spec.beta1);
    return b_lambda(x, spec, grid).det_shifted(x);
  };

  for (const auto& ev : report.eigenvalues) {
    if (std::fabs(ev.imag()) > 1e-8 * std::max(1.0, std::fabs(ev.real()))) continue;
    const double x = ev.real();
    if (x < lambda_lo || x > lambda_hi) continue;
    if (pole_distance(x) <= 0.5) continue;
    report.matched_eigenvalues.push_back(x);
    report.match_residuals.push_back(std::fabs(residual_at(x)));
  }

  if (cr) {
    report.roots = char_roots(spec.beta0, spec.beta1, lambda_lo, lambda_hi);
  } else {
    // Pad must also cover the O(h^2) spread of the discrete Dirichlet
    // eigenvalues around the continuum poles.
    const double disp = M_PI * M_PI * M_PI * M_PI * grid.h * grid.h;
    std::vector<double> poles = dirichlet_poles_in(lambda_lo, lambda_hi);
    double pad = 1e-4;
    for (double p : poles) {
      const double k2 = std::fabs(p) / (M_PI * M_PI);
      pad = std::max(pad, k2 * k2 * disp / 3.0);
    }
    report.roots = scan_real_roots(residual_at, lambda_lo, lambda_hi, poles, pad);
  }

  for (double r : report.roots) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ev : report.eigenvalues) {
      if (std::fabs(ev.imag()) > 1e-8 * std::max(1.0, std::fabs(ev.real()))) continue;
      best = std::min(best, std::fabs(ev.real() - r));
    }
    report.root_to_eig_distance.push_back(best);
  }

  if (!report.roots.empty()) {
    for (int k = 1; k <= 8; ++k) {
      if (periodicity_condition_check(report.roots, 2.0 * k, 1e-6, false)) {
        report.gamma_periodic = 2.0 * k;
        break;
      }
    }
  }
  return report;
}

bool periodicity_condition_check(const std::vector<double>& roots, double gamma,
                                 double tol, bool admit_zero) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("gamma must be positive");
  if (!(tol >= 0.0)) throw ArgumentError("tol must be nonnegative");

  const double omega = 2.0 * M_PI / gamma;
  const double omega2 = omega * omega;
  for (double root : roots) {
    if (root > tol) return false;
    double n = std::round(std::sqrt(std::max(0.0, -root)) / omega);
    if (!admit_zero && n < 1.0) n = 1.0;
    if (std::fabs(root + omega2 * n * n) > tol) return false;
  }
  return true;
}

} // namespace dynwave
