#include "dynwave/dalembert.hpp"

#include <cmath>
#include <utility>

#include "dynwave/kernels.hpp"

namespace dynwave {

namespace {

// Is t an integer multiple of h? Returns the multiple through m.
bool grid_aligned(const Grid& g, double t, long& m) {
  const double s = t * g.n_cells;
  const double r = std::nearbyint(s);
  if (std::fabs(r) > 9.0e15) return false; // beyond exact long range
  if (std::fabs(s - r) <= 1.0e-8 * std::max(1.0, std::fabs(s))) {
    m = static_cast<long>(r);
    return true;
  }
  return false;
}

} // namespace

ExtendedFunction::ExtendedFunction(GridFunction base) : base_(std::move(base)) {
  const int n = base_.grid.n_cells;
  const double h = base_.grid.h;
  anti_.assign(n + 1, 0.0);
  for (int i = 1; i <= n; ++i)
    anti_[i] = anti_[i - 1] + 0.5 * h * (base_.values[i - 1] + base_.values[i]);
}

double ExtendedFunction::value_at_index(long k) const {
  const long n = base_.grid.n_cells;
  long m = k % (2 * n);
  if (m <= -n)
    m += 2 * n;
  else if (m > n)
    m -= 2 * n;
  return m >= 0 ? base_.values[m] : -base_.values[-m];
}

double ExtendedFunction::antiderivative_at_index(long k) const {
  const long n = base_.grid.n_cells;
  long r = std::labs(k) % (2 * n);
  if (r > n) r = 2 * n - r;
  return anti_[r];
}

double ExtendedFunction::value(double x) const {
  // Reduce into (-1, 1]; both corrections are exact (Sterbenz).
  double y = std::fmod(x, 2.0);
  if (y <= -1.0)
    y += 2.0;
  else if (y > 1.0)
    y -= 2.0;
  double sign = 1.0;
  if (y < 0.0) {
    sign = -1.0;
    y = -y;
  }
  const int n = base_.grid.n_cells;
  const double xi = y * n;
  int i = static_cast<int>(xi);
  if (i >= n) i = n - 1;
  const double w = xi - i;
  return sign * ((1.0 - w) * base_.values[i] + w * base_.values[i + 1]);
}

double ExtendedFunction::antiderivative(double x) const {
  double y = std::fmod(x, 2.0);
  if (y <= -1.0)
    y += 2.0;
  else if (y > 1.0)
    y -= 2.0;
  if (y < 0.0) y = -y; // even
  const int n = base_.grid.n_cells;
  const double xi = y * n;
  int i = static_cast<int>(xi);
  if (i >= n) i = n - 1;
  const double w = xi - i;
  return (1.0 - w) * anti_[i] + w * anti_[i + 1];
}

double extend_eval(const ExtendedFunction& e, double x) {
  if (!std::isfinite(x)) throw ArgumentError("extension query point is not finite");
  long m = 0;
  if (grid_aligned(e.grid(), x, m)) return e.value_at_index(m);
  return e.value(x);
}

GridFunction cosine_apply(const ExtendedFunction& e, double t) {
  const Grid& g = e.grid();
  std::vector<double> out(g.n_nodes());
  long m = 0;
  if (grid_aligned(g, t, m)) {
    kernels::parallel_for(out.size(), [&](std::size_t i) {
      const long k = static_cast<long>(i);
      out[i] = 0.5 * (e.value_at_index(k + m) + e.value_at_index(k - m));
    });
  } else {
    kernels::parallel_for(out.size(), [&](std::size_t i) {
      const double x = g.node(static_cast<int>(i));
      out[i] = 0.5 * (e.value(x + t) + e.value(x - t));
    });
  }
  return GridFunction(g, std::move(out));
}

GridFunction sine_apply(const ExtendedFunction& e, double t) {
  const Grid& g = e.grid();
  std::vector<double> out(g.n_nodes());
  long m = 0;
  if (grid_aligned(g, t, m)) {
    kernels::parallel_for(out.size(), [&](std::size_t i) {
      const long k = static_cast<long>(i);
      out[i] = 0.5 * (e.antiderivative_at_index(k + m) - e.antiderivative_at_index(k - m));
    });
  } else {
    kernels::parallel_for(out.size(), [&](std::size_t i) {
      const double x = g.node(static_cast<int>(i));
      out[i] = 0.5 * (e.antiderivative(x + t) - e.antiderivative(x - t));
    });
  }
  return GridFunction(g, std::move(out));
}

GridFunction cosine_apply(const GridFunction& f, double t) {
  return cosine_apply(ExtendedFunction(f), t);
}

GridFunction sine_apply(const GridFunction& f, double t) {
  return sine_apply(ExtendedFunction(f), t);
}

BoundaryPair boundary_flux_sine(const GridFunction& f, double t, double a0, double a1) {
  if (!std::isfinite(t)) throw ArgumentError("flux time is not finite");
  ExtendedFunction e(f);
  return BoundaryPair{a0 * extend_eval(e, t), -a1 * extend_eval(e, 1.0 - t)};
}

double miyadera_integral(const GridFunction& f, double a0, double a1) {
  // || (a0 f~(s), -a1 f~(1-s)) ||_1 = |a0||f(s)| + |a1||f(1-s)| on s in (0,1).
  const Grid& g = f.grid;
  const int n = g.n_cells;
  std::vector<double> integrand(g.n_nodes());
  for (int i = 0; i <= n; ++i)
    integrand[i] =
        std::fabs(a0) * std::fabs(f.values[i]) + std::fabs(a1) * std::fabs(f.values[n - i]);
  return trapezoid(g, integrand);
}

} // namespace dynwave
