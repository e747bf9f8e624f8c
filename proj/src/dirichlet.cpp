#include "dynwave/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dynwave/errors.hpp"
#include "dynwave/kernels.hpp"

namespace dynwave {

void require_off_dirichlet_poles(double lambda) {
  if (lambda >= 0.0) return;
  const double sg = std::sqrt(-lambda);
  const double k = std::round(sg / M_PI);
  if (k < 1.0) return;
  const double pole = -(k * M_PI) * (k * M_PI);
  if (std::fabs(lambda - pole) < 1e-8) {
    throw SingularityError("lambda = " + std::to_string(lambda) +
                           " is within 1e-8 of the Dirichlet pole " + std::to_string(pole));
  }
}

namespace {

// sinh(mu*s)/sinh(mu) without overflow: all exponents are <= 0.
double sinh_ratio(double mu, double s) {
  if (mu == 0.0) return s;
  return std::exp(-mu * (1.0 - s)) * std::expm1(-2.0 * mu * s) / std::expm1(-2.0 * mu);
}

} // namespace

DirichletEvaluation dirichlet_closed_form(double lambda, const BoundaryPair& y,
                                          const Grid& grid) {
  if (!std::isfinite(lambda) || !std::isfinite(y.at0) || !std::isfinite(y.at1))
    throw ArgumentError("dirichlet_closed_form: non-finite input");
  require_off_dirichlet_poles(lambda);

  GridFunction u = GridFunction::zero(grid);
  const int n = grid.n_cells;
  if (lambda > 0.0) {
    const double mu = std::sqrt(lambda);
    for (int i = 0; i <= n; ++i) {
      const double s = grid.node(i);
      u.values[i] = y.at0 * sinh_ratio(mu, 1.0 - s) + y.at1 * sinh_ratio(mu, s);
    }
  } else if (lambda == 0.0) {
    for (int i = 0; i <= n; ++i) {
      const double s = grid.node(i);
      u.values[i] = y.at0 * (1.0 - s) + y.at1 * s;
    }
  } else {
    const double sg = std::sqrt(-lambda);
    const double denom = std::sin(sg);
    for (int i = 0; i <= n; ++i) {
      const double s = grid.node(i);
      u.values[i] = (y.at0 * std::sin(sg * (1.0 - s)) + y.at1 * std::sin(sg * s)) / denom;
    }
  }
  // Pin the endpoint samples exactly.
  u.values[0] = y.at0;
  u.values[n] = y.at1;
  return DirichletEvaluation{lambda, y, std::move(u)};
}

DirichletEvaluation discrete_dirichlet(double lambda, const BoundaryPair& y,
                                       const Grid& grid, const GridFunction& q,
                                       const GridFunction& r) {
  if (!std::isfinite(lambda) || !std::isfinite(y.at0) || !std::isfinite(y.at1))
    throw ArgumentError("discrete_dirichlet: non-finite input");
  if (!(q.grid == grid) || !(r.grid == grid))
    throw ArgumentError("discrete_dirichlet: coefficient grids do not match");

  const int n = grid.n_cells;
  const double h = grid.h;
  const double ih2 = 1.0 / (h * h);
  const int m = n - 1; // interior unknowns u_1 .. u_{n-1}

  // Row i of (lambda - A_h)u = 0:
  //   -(ih2 - q_i/(2h)) u_{i-1} + (lambda + 2 ih2 - r_i) u_i - (ih2 + q_i/(2h)) u_{i+1} = 0
  std::vector<double> diag(m), rhs(m, 0.0), sub(m), sup(m);
  for (int i = 1; i <= m; ++i) {
    const double qs = q.values[i] / (2.0 * h);
    sub[i - 1] = -(ih2 - qs);
    diag[i - 1] = lambda + 2.0 * ih2 - r.values[i];
    sup[i - 1] = -(ih2 + qs);
  }
  rhs[0] -= sub[0] * y.at0;
  rhs[m - 1] -= sup[m - 1] * y.at1;

  // Thomas elimination; a vanishing pivot means lambda sits on a discrete
  // eigenvalue of A_h and the lift does not exist.
  const double pivot_floor = 1e-14 * (std::fabs(lambda) + 4.0 * ih2);
  std::vector<double> cp(m), dp(m);
  double pivot = diag[0];
  if (std::fabs(pivot) < pivot_floor)
    throw SingularityError("discrete_dirichlet: singular tridiagonal system at lambda = " +
                           std::to_string(lambda));
  cp[0] = sup[0] / pivot;
  dp[0] = rhs[0] / pivot;
  for (int i = 1; i < m; ++i) {
    pivot = diag[i] - sub[i] * cp[i - 1];
    if (std::fabs(pivot) < pivot_floor)
      throw SingularityError("discrete_dirichlet: singular tridiagonal system at lambda = " +
                             std::to_string(lambda));
    cp[i] = sup[i] / pivot;
    dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / pivot;
  }

  GridFunction u = GridFunction::zero(grid);
  u.values[0] = y.at0;
  u.values[n] = y.at1;
  u.values[m] = dp[m - 1];
  for (int i = m - 1; i >= 1; --i) u.values[i] = dp[i - 1] - cp[i - 1] * u.values[i + 1];
  return DirichletEvaluation{lambda, y, std::move(u)};
}

DirichletEvaluation discrete_dirichlet(double lambda, const BoundaryPair& y,
                                       const Grid& grid) {
  GridFunction z = GridFunction::zero(grid);
  return discrete_dirichlet(lambda, y, grid, z, z);
}

double dirichlet_norm(double lambda, double p, const Grid& grid, int n_directions,
                      unsigned seed) {
  if (!(lambda > 0.0)) throw ArgumentError("dirichlet_norm: lambda must be positive");
  if (!(p >= 1.0) || !std::isfinite(p)) throw ArgumentError("dirichlet_norm: p must be >= 1");
  if (n_directions < 8) throw ArgumentError("dirichlet_norm: need at least 8 directions");

  // Refine the evaluation grid so the exp(-sqrt(lambda) s) boundary layer is
  // resolved by the trapezoid quadrature in lp_norm.
  const double mu = std::sqrt(lambda);
  const int n_eval = std::max(grid.n_cells, static_cast<int>(std::ceil(40.0 * mu)));
  const Grid fine(n_eval);

  std::vector<BoundaryPair> dirs;
  dirs.reserve(static_cast<std::size_t>(n_directions));
  dirs.push_back(BoundaryPair{1.0, 0.0});
  dirs.push_back(BoundaryPair{-1.0, 0.0});
  dirs.push_back(BoundaryPair{0.0, 1.0});
  dirs.push_back(BoundaryPair{0.0, -1.0});
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int d = 4; d < n_directions; ++d) {
    const double a = unit(gen);
    const double s0 = unit(gen) < 0.5 ? -1.0 : 1.0;
    const double s1 = unit(gen) < 0.5 ? -1.0 : 1.0;
    dirs.push_back(BoundaryPair{s0 * a, s1 * (1.0 - a)});
  }

  std::vector<double> norms(dirs.size(), 0.0);
  kernels::parallel_for(dirs.size(), [&](std::size_t d) {
    norms[d] = lp_norm(dirichlet_closed_form(lambda, dirs[d], fine).profile, p);
  }, kernels::Exec::Auto, static_cast<std::size_t>(n_eval));
  return *std::max_element(norms.begin(), norms.end());
}

double decay_exponent_fit(double p, const std::vector<double>& lambda_grid,
                          const Grid& grid, int n_directions, unsigned seed) {
  if (lambda_grid.size() < 3)
    throw ArgumentError("decay_exponent_fit: need at least 3 lambda values");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0))
      throw ArgumentError("decay_exponent_fit: lambda values must be positive");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
      throw ArgumentError("decay_exponent_fit: lambda values must be increasing");
  }

  const std::size_t m = lambda_grid.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    lx[i] = std::log(lambda_grid[i]);
    ly[i] = std::log(dirichlet_norm(lambda_grid[i], p, grid, n_directions, seed));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double dm = static_cast<double>(m);
  return (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
}

} // namespace dynwave
