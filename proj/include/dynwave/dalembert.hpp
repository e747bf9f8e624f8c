#pragma once

#include <vector>

#include "dynwave/grid.hpp"

namespace dynwave {

/// Odd, 2-periodic extension of a grid function on [0,1], together with its
/// antiderivative (cumulative trapezoid, F(0) = 0), which is even and
/// 2-periodic because the odd extension integrates to zero over a period.
///
/// Grid-aligned queries go through pure index arithmetic (reduce mod 2N,
/// reflect, sign), so shift identities hold to roundoff, not just to O(h^2).
/// At the reflection fixed points (x = 0 and x = 1 mod 2) the extension keeps
/// the stored sample, which makes C(0) = I and C(2) = I exact for every f;
/// genuine oddness across those points then requires zero endpoint samples.
class ExtendedFunction {
public:
  explicit ExtendedFunction(GridFunction base);

  const GridFunction& base() const { return base_; }
  const Grid& grid() const { return base_.grid; }

  /// Extension value at grid index k (node x = k*h for any integer k).
  double value_at_index(long k) const;

  /// Antiderivative value at grid index k.
  double antiderivative_at_index(long k) const;

  /// Extension value anywhere on R (linear interpolation off the nodes).
  double value(double x) const;

  /// Antiderivative anywhere on R (linear interpolation off the nodes).
  double antiderivative(double x) const;

private:
  GridFunction base_;
  std::vector<double> anti_;
};

/// Extension value at x; exact at points i*h + 2k and their reflections.
double extend_eval(const ExtendedFunction& e, double x);

/// Cosine kernel (f~(x+t) + f~(x-t))/2 sampled at the nodes. Grid-aligned t
/// (integer multiple of h) uses the exact index path.
GridFunction cosine_apply(const ExtendedFunction& e, double t);
GridFunction cosine_apply(const GridFunction& f, double t);

/// Sine kernel (F~(x+t) - F~(x-t))/2 sampled at the nodes.
GridFunction sine_apply(const ExtendedFunction& e, double t);
GridFunction sine_apply(const GridFunction& f, double t);

/// Boundary flux of the sine kernel: (a0*f~(t), -a1*f~(1-t)).
BoundaryPair boundary_flux_sine(const GridFunction& f, double t, double a0, double a1);

/// Quadrature of integral_0^1 of the l1 norm of the boundary flux, which the
/// exact flux formula collapses to (|a0|+|a1|) * l1 norm of f.
double miyadera_integral(const GridFunction& f, double a0, double a1);

} // namespace dynwave
