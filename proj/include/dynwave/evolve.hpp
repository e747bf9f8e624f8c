#pragma once

#include <vector>

#include "dynwave/grid.hpp"
#include "dynwave/spectral.hpp"

namespace dynwave {

/// Second-order phase state: wave displacement/velocity samples plus the two
/// boundary unknowns and their velocities. In trace mode x duplicates the
/// endpoint samples of u; in normal-derivative mode x holds the fluxes
/// (-u'(0), u'(1)).
struct PhaseState {
  GridFunction u;
  GridFunction v;
  BoundaryPair x;
  BoundaryPair xdot;
};

/// Sampled evolution history. Samples are uniformly spaced in time (every
/// sample_stride integrator steps, starting at t = 0).
struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<double> energies;
};

/// Validates compatibility between field data (f, g) and boundary data (h, j)
/// and packs them into a state. Trace mode requires the endpoint samples of f
/// and g to match h and j to 1e-10; normal-derivative mode requires the
/// one-sided derivatives of f to match the fluxes h up to O(h^2).
PhaseState init_state(const GridFunction& f, const GridFunction& g, const BoundaryPair& h,
                      const BoundaryPair& j, const ProblemSpec& spec);

/// One kick-drift-kick leapfrog step of u'' = M u with the coefficients'
/// velocity forces (boundary/flux damping and flux-velocity coupling) folded into the
/// kicks by an exact scalar implicit solve. |dt| must be <= 0.5 h; negative
/// dt steps backward. Throws BlowUpError when a non-finite value appears.
void step_leapfrog(PhaseState& state, double dt, const ProblemSpec& spec,
                   const OperatorMatrix& m, long step_index = 0);

/// Integrate to time T with step dt (dt <= 0 selects the default 0.5 h) and
/// record every sample_stride-th step. Energies use the trace-mode energy or
/// the normal-derivative diagnostic depending on the coupling.
Trajectory simulate(const ProblemSpec& spec, const Grid& grid, const GridFunction& f,
                    const GridFunction& g, const BoundaryPair& h, const BoundaryPair& j,
                    double T, double dt = 0.0, int sample_stride = 1);

/// Trace-mode energy
///   E = 1/2 ||v||^2 + 1/2 |xdot|^2 + 1/2 |u'|^2 - 1/2 int r u^2
///       - 1/2 (beta0 u(0)^2 + beta1 u(1)^2).
/// Conserved by the continuum flow when alpha = (1,-1) and no damping acts.
double energy(const PhaseState& s, const ProblemSpec& spec);

/// Normal-derivative-mode diagnostic: field energy plus one oscillator term
/// 1/2 (xdot_j^2 + |ac_q_j| x_j^2) per flux.
double flux_energy(const PhaseState& s, const ProblemSpec& spec);

/// Exact trace-coupled solution for alpha = beta = 0, q = r = 0:
///   u(t) = C(t)(f - D0 h) + D0 h + S(t)(g - D0 j) + t D0 j,  x(t) = h + t j,
/// where D0 is the lift at lambda = 0 and C, S the wave kernels. The velocity
/// field is reported as a centered kernel difference (O(h^2)).
PhaseState closed_form_trace_solution(const GridFunction& f, const GridFunction& g,
                                      const BoundaryPair& h, const BoundaryPair& j,
                                      double t, const Grid& grid);

/// Wave problem with inhomogeneous linear-in-time boundary values
/// x(t) = xi + t psi: requires j = psi (the boundary velocity is the slope)
/// and reduces to closed_form_trace_solution with h = xi.
PhaseState inhomogeneous_bc_solution(const BoundaryPair& psi, const BoundaryPair& xi,
                                     const GridFunction& f, const GridFunction& g,
                                     const BoundaryPair& j, double t, const Grid& grid);

/// max over sample pairs (t, t + period) of ||u(t+period) - u(t)||_2,
/// normalized by ||u(0)||_2. The period must align with the sample spacing.
double periodicity_defect(const Trajectory& traj, double period);

/// min over samples with window_lo <= t <= window_hi of
///   (||u - u(0)||_2 + ||v - v(0)||_2) / (||u(0)||_2 + ||v(0)||_2).
double recurrence_defect(const Trajectory& traj, double window_lo, double window_hi);

/// Least-squares slope of ln|c_k| against ln k for the discrete sine
/// coefficients c_k of u, k = 1 .. max(4, N/4). Only coefficients above the
/// round-off floor max(1e-18, 1e-13 * max_k |c_k|) enter the fit, so noise
/// plateaus do not flatten the slope; if fewer than two coefficients are
/// resolvable the fit degenerates to k = 1, 2 with |c_k| clamped at 1e-18.
double sine_coefficient_slope(const GridFunction& u);

/// sine_coefficient_slope of every sampled displacement.
std::vector<double> smoothness_diagnostic(const Trajectory& traj);

} // namespace dynwave
