#pragma once

#include <vector>

#include "dynwave/grid.hpp"

namespace dynwave {

/// Lifted boundary data: the harmonic-type profile solving (lambda - A)u = 0
/// with prescribed endpoint values.
struct DirichletEvaluation {
  double lambda;
  BoundaryPair boundary;
  GridFunction profile;
};

/// Throws SingularityError when lambda is within 1e-8 of a Dirichlet pole
/// -k^2 pi^2 (where the lifting operator does not exist).
void require_off_dirichlet_poles(double lambda);

/// Closed-form profile for q = r = 0:
///   lambda > 0: (y0 sinh(mu(1-s)) + y1 sinh(mu s))/sinh(mu), mu = sqrt(lambda),
///               evaluated in an exp/expm1 form that cannot overflow;
///   lambda = 0: linear interpolant y0 (1-s) + y1 s;
///   lambda < 0: (y0 sin(sg(1-s)) + y1 sin(sg s))/sin(sg), sg = sqrt(-lambda).
DirichletEvaluation dirichlet_closed_form(double lambda, const BoundaryPair& y,
                                          const Grid& grid);

/// Discrete lift: tridiagonal solve of (lambda - A_h)u = 0 at interior nodes
/// with u_0 = y.at0, u_N = y.at1, where A_h includes first-order coefficient q
/// (centered) and zeroth-order coefficient r.
DirichletEvaluation discrete_dirichlet(double lambda, const BoundaryPair& y,
                                       const Grid& grid, const GridFunction& q,
                                       const GridFunction& r);

/// Convenience overload with q = r = 0.
DirichletEvaluation discrete_dirichlet(double lambda, const BoundaryPair& y,
                                       const Grid& grid);

/// Estimate of the operator norm of the lift from (C^2, l1) into L^p:
/// max of lp_norm(D_lambda y, p) over the four l1-sphere vertices plus
/// n_directions - 4 seeded random sphere points. The quadrature grid is
/// refined internally to resolve the sqrt(lambda) boundary layer.
double dirichlet_norm(double lambda, double p, const Grid& grid, int n_directions = 32,
                      unsigned seed = 0);

/// Least-squares slope of log norm against log lambda over lambda_grid;
/// the expected decay exponent is -1/(2p).
double decay_exponent_fit(double p, const std::vector<double>& lambda_grid,
                          const Grid& grid, int n_directions = 32, unsigned seed = 0);

} // namespace dynwave
