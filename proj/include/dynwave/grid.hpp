#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "dynwave/errors.hpp"

namespace dynwave {

/// Uniform grid on [0,1] with N cells and N+1 nodes x_i = i*h, h = 1/N.
struct Grid {
  int n_cells;
  double h;

  explicit Grid(int n) : n_cells(n), h(1.0 / n) {
    if (n < 4) throw ArgumentError("grid needs N >= 4, got N = " + std::to_string(n));
  }
  int n_nodes() const { return n_cells + 1; }
  double node(int i) const { return i * h; }
  bool operator==(const Grid& o) const { return n_cells == o.n_cells; }
};

/// Value pair attached to the two endpoints of the interval.
struct BoundaryPair {
  double at0 = 0.0;
  double at1 = 0.0;
};

/// Nodal samples of a function on a Grid. Immutable by convention after
/// construction; operations return new values.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n_nodes())
      throw ArgumentError("grid function needs " + std::to_string(grid.n_nodes()) +
                          " samples, got " + std::to_string(values.size()));
    for (double x : values)
      if (!std::isfinite(x)) throw ArgumentError("grid function sample is not finite");
  }

  static GridFunction zero(const Grid& g) {
    return GridFunction(g, std::vector<double>(g.n_nodes(), 0.0));
  }

  template <class F>
  static GridFunction sample(const Grid& g, F&& f) {
    std::vector<double> v(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i) v[i] = f(g.node(i));
    return GridFunction(g, std::move(v));
  }

  double at0() const { return values.front(); }
  double at1() const { return values.back(); }
};

/// Composite trapezoid rule for nodal samples on g. Serial on purpose:
/// quadrature results feed CSV output and must not depend on thread count.
double trapezoid(const Grid& g, const std::vector<double>& integrand);

/// Trapezoid approximation of (integral of |f|^p)^(1/p). p = 1 and p = 2
/// avoid pow so that scaling by powers of two stays exact.
double lp_norm(const GridFunction& f, double p);

/// L2 norm of the centered-difference derivative (second-order one-sided at
/// the endpoints).
double sobolev_seminorm(const GridFunction& f);

enum class Side { Left, Right };

/// Second-order one-sided derivative at an endpoint:
/// left (-3u0+4u1-u2)/(2h), right (3uN-4u(N-1)+u(N-2))/(2h).
double one_sided_derivative(const GridFunction& f, Side side);

} // namespace dynwave
