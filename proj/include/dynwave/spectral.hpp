#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "dynwave/grid.hpp"
#include "dynwave/kernels.hpp"

namespace dynwave {

/// How the boundary dynamics couple to the wave field: through the boundary
/// traces u(0), u(1) themselves, or through the normal derivatives (acoustic
/// flux variables) as separate degrees of freedom.
enum class Coupling { Trace, NormalDerivative };

/// Full description of one coupled problem on (0,1).
struct ProblemSpec {
  Coupling coupling = Coupling::Trace;
  double lp_exponent = 2.0;

  GridFunction q_coef; ///< first-order interior coefficient (centered differences)
  GridFunction r_coef; ///< zeroth-order interior coefficient

  // Boundary dynamics x''_j = alpha_j u'(j) + beta_j x_j (+ damping terms).
  double alpha0 = 0.0, alpha1 = 0.0;
  double beta0 = 0.0, beta1 = 0.0;

  // Trace-mode velocity damping: c_j u'(j-dot) and c~_j x'_j act on the same
  // degree of freedom, so they enter the boundary rows as (c_j + c~_j) x'_j.
  double damp_c0 = 0.0, damp_c1 = 0.0;
  double damp_ct0 = 0.0, damp_ct1 = 0.0;

  // Normal-derivative (acoustic) flux dynamics:
  //   delta''_j = ac_q_j delta_j + ac_p_j u'(j-dot) + ac_r_j delta'_j.
  double ac_p0 = 0.0, ac_p1 = 0.0;
  double ac_q0 = 0.0, ac_q1 = 0.0;
  double ac_r0 = 0.0, ac_r1 = 0.0;

  explicit ProblemSpec(const Grid& grid)
      : q_coef(GridFunction::zero(grid)), r_coef(GridFunction::zero(grid)) {}

  const Grid& grid() const { return q_coef.grid; }
};

/// Index layout of the assembled operator. Trace mode: nodes 0..N only
/// (boundary traces are nodes 0 and N). Normal-derivative mode: nodes 0..N
/// followed by the two flux unknowns.
struct DofMap {
  Coupling coupling = Coupling::Trace;
  int n_cells = 0;
  int dim = 0;

  int node(int i) const { return i; }
  int flux0() const { return n_cells + 1; }
  int flux1() const { return n_cells + 2; }
};

/// Dense row-major matrix of the assembled spatial operator, with a
/// row-compressed copy of its nonzeros for fast repeated products.
/// assemble() fills `support`; hand-built instances may leave it empty and
/// call refresh_support() before stepping.
struct OperatorMatrix {
  DofMap dofs;
  std::vector<double> entries; ///< dofs.dim x dofs.dim, row-major
  kernels::RowSupport support;

  double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * dofs.dim + j]; }
  void refresh_support() { support = kernels::RowSupport::from_dense(entries, dofs.dim); }
};

/// Assemble the second-order finite-difference discretization of the coupled
/// operator (wave interior plus boundary/flux rows).
OperatorMatrix assemble(const ProblemSpec& spec, const Grid& grid);

/// All eigenvalues of the assembled matrix, sorted by real part then
/// imaginary part. Delegates to a dense QR eigensolver.
std::vector<std::complex<double>> eigs(const OperatorMatrix& m);

/// Real eigenpairs (eigenvalue, eigenvector) of the assembled matrix, sorted
/// by descending eigenvalue (closest to zero first). Eigenvectors are
/// L2-normalized with their largest-magnitude component made positive.
std::vector<std::pair<double, std::vector<double>>> real_eigenpairs(const OperatorMatrix& m);

/// The `count` real eigenpairs closest to zero, same ordering and
/// normalization as real_eigenpairs. Eigenvalues are taken from the
/// vector-free dense solve and the eigenvectors recovered by shifted inverse
/// iteration, which stays fast at resolutions where requesting all
/// eigenvectors from the dense solver does not.
std::vector<std::pair<double, std::vector<double>>> slowest_real_modes(const OperatorMatrix& m,
                                                                       int count);

/// 2x2 boundary block B_lambda = B~ + B D_lambda built from discrete lifts:
/// entry (i,j) = alpha_i d/dn [D_lambda e_j](i) + beta_i delta_ij.
struct BoundaryBlock {
  double a00 = 0.0, a01 = 0.0, a10 = 0.0, a11 = 0.0;

  double det_shifted(double lambda) const {
    return (lambda - a00) * (lambda - a11) - a01 * a10;
  }
};

BoundaryBlock b_lambda(double lambda, const ProblemSpec& spec, const Grid& grid);

/// Characteristic function of the coupled problem for alpha = (1,-1), q=r=0:
///   lambda^2 + lambda (1 + 2c - (beta0+beta1)) - (beta0+beta1) c + beta0 beta1
/// with c = sqrt(lambda) coth sqrt(lambda) (lambda > 0), c = 1 (lambda = 0),
/// c = sg cot sg with sg = sqrt(-lambda) (lambda < 0).
double char_eval(double lambda, double beta0, double beta1);

/// All real roots of char_eval in [lambda_min, lambda_max] (lambda_max <= 0),
/// located by a sign-change scan of step 0.01 pi^2 refined by bisection to
/// width 1e-10. Pole neighbourhoods of c are excluded from the scan.
std::vector<double> char_roots(double beta0, double beta1, double lambda_min,
                               double lambda_max);

/// Max-norm defect of the factorization (A - lambda) = A_lambda L_lambda,
/// where L_lambda subtracts the lifted boundary part and A_lambda carries the
/// interior operator and the boundary block. Trace mode only.
double factorization_residual(double lambda, const ProblemSpec& spec, const Grid& grid);

/// Joint spectral diagnostics over a real window.
struct SpectralReport {
  std::vector<std::complex<double>> eigenvalues; ///< full spectrum, sorted
  std::vector<double> matched_eigenvalues; ///< real, in-window, away from Dirichlet poles
  std::vector<double> match_residuals;     ///< characteristic residual per matched eigenvalue
  std::vector<double> roots;               ///< characteristic roots in the window
  std::vector<double> root_to_eig_distance; ///< per root: distance to nearest eigenvalue
  std::optional<double> gamma_periodic;    ///< detected period when roots fit -(2pi/gamma)^2 n^2
};

/// Computes eigenvalues of the assembled matrix, characteristic roots in
/// [lambda_lo, lambda_hi], and residuals of each in-window real eigenvalue
/// under the characteristic function. When the coefficients are not the
/// alpha=(1,-1), q=r=0 model, residuals use det(lambda - B_lambda) instead of
/// char_eval.
SpectralReport spectral_equivalence_check(const ProblemSpec& spec, const Grid& grid,
                                          double lambda_lo = -50.0,
                                          double lambda_hi = -0.05);

/// True when every root lies within tol of -(2 pi / gamma)^2 n^2 for some
/// integer n >= 1 (n >= 0 when admit_zero).
bool periodicity_condition_check(const std::vector<double>& roots, double gamma,
                                 double tol, bool admit_zero = false);

} // namespace dynwave
