#include "dynwave/grid.hpp"

#include <cmath>
#include <string>

namespace dynwave {

double trapezoid(const Grid& g, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != g.n_nodes())
    throw ArgumentError("integrand size does not match grid");
  double acc = 0.5 * (v.front() + v.back());
  for (int i = 1; i < g.n_cells; ++i) acc += v[i];
  return acc * g.h;
}

double lp_norm(const GridFunction& f, double p) {
  if (!std::isfinite(p) || p < 1.0)
    throw ArgumentError("lp_norm needs p in [1, inf), got p = " + std::to_string(p));
  const int m = f.grid.n_nodes();
  std::vector<double> integrand(m);
  if (p == 1.0) {
    for (int i = 0; i < m; ++i) integrand[i] = std::fabs(f.values[i]);
    return trapezoid(f.grid, integrand);
  }
  if (p == 2.0) {
    for (int i = 0; i < m; ++i) integrand[i] = f.values[i] * f.values[i];
    return std::sqrt(trapezoid(f.grid, integrand));
  }
  for (int i = 0; i < m; ++i) integrand[i] = std::pow(std::fabs(f.values[i]), p);
  return std::pow(trapezoid(f.grid, integrand), 1.0 / p);
}

double sobolev_seminorm(const GridFunction& f) {
  const Grid& g = f.grid;
  const int n = g.n_cells;
  const std::vector<double>& u = f.values;
  std::vector<double> dsq(g.n_nodes());
  const double left = one_sided_derivative(f, Side::Left);
  const double right = one_sided_derivative(f, Side::Right);
  dsq[0] = left * left;
  dsq[n] = right * right;
  for (int i = 1; i < n; ++i) {
    const double d = (u[i + 1] - u[i - 1]) / (2.0 * g.h);
    dsq[i] = d * d;
  }
  return std::sqrt(trapezoid(g, dsq));
}

double one_sided_derivative(const GridFunction& f, Side side) {
  const std::vector<double>& u = f.values;
  const double h = f.grid.h;
  const int n = f.grid.n_cells;
  // Grouped as differences so constant data yields exactly zero.
  if (side == Side::Left)
    return (3.0 * (u[1] - u[0]) + (u[1] - u[2])) / (2.0 * h);
  return (3.0 * (u[n] - u[n - 1]) - (u[n - 1] - u[n - 2])) / (2.0 * h);
}

} // namespace dynwave
