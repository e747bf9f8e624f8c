#include "dynwave/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynwave/dalembert.hpp"
#include "dynwave/dirichlet.hpp"
#include "dynwave/errors.hpp"
#include "dynwave/kernels.hpp"

namespace dynwave {

namespace {

std::string fmt(double x) { return std::to_string(x); }

double kick_denom(double half_dt, double kappa) {
  // w = v + half_dt * (a + kappa * w) divides the plain kick by this factor.
  const double denom = 1.0 - half_dt * kappa;
  if (denom == 0.0)
    throw NumericalError("velocity damping makes the implicit kick singular");
  return denom;
}

} // namespace

PhaseState init_state(const GridFunction& f, const GridFunction& g, const BoundaryPair& h,
                      const BoundaryPair& j, const ProblemSpec& spec) {
  const Grid& grid = spec.grid();
  if (!(f.grid == grid) || !(g.grid == grid))
    throw ArgumentError("init_state: data grids do not match the problem grid");
  if (!std::isfinite(h.at0) || !std::isfinite(h.at1) || !std::isfinite(j.at0) ||
      !std::isfinite(j.at1))
    throw ArgumentError("init_state: non-finite boundary data");

  PhaseState s{f, g, h, j};
  const int n = grid.n_cells;

  if (spec.coupling == Coupling::Trace) {
    if (std::fabs(f.at0() - h.at0) > 1e-10 || std::fabs(f.at1() - h.at1) > 1e-10)
      throw ArgumentError("init_state: displacement trace (" + fmt(f.at0()) + ", " +
                          fmt(f.at1()) + ") does not match the boundary position datum (" +
                          fmt(h.at0) + ", " + fmt(h.at1) + ")");
    if (std::fabs(g.at0() - j.at0) > 1e-10 || std::fabs(g.at1() - j.at1) > 1e-10)
      throw ArgumentError("init_state: velocity trace (" + fmt(g.at0()) + ", " + fmt(g.at1()) +
                          ") does not match the boundary velocity datum (" + fmt(j.at0) +
                          ", " + fmt(j.at1) + ")");
    // Pin the duplicated degrees of freedom exactly.
    s.u.values[0] = h.at0;
    s.u.values[n] = h.at1;
    s.v.values[0] = j.at0;
    s.v.values[n] = j.at1;
  } else {
    double scale = 1.0;
    for (double v : f.values) scale = std::max(scale, std::fabs(v));
    const double tol = 100.0 * grid.h * grid.h * scale;
    const double flux0 = -one_sided_derivative(f, Side::Left);
    const double flux1 = one_sided_derivative(f, Side::Right);
    if (std::fabs(flux0 - h.at0) > tol || std::fabs(flux1 - h.at1) > tol)
      throw ArgumentError("init_state: flux datum (" + fmt(h.at0) + ", " + fmt(h.at1) +
                          ") does not match the one-sided derivatives of f (" + fmt(flux0) +
                          ", " + fmt(flux1) + ")");
  }
  return s;
}

void step_leapfrog(PhaseState& state, double dt, const ProblemSpec& spec,
                   const OperatorMatrix& m, long step_index) {
  const Grid& grid = spec.grid();
  const int n = grid.n_cells;
  if (!(state.u.grid == grid))
    throw ArgumentError("step_leapfrog: state grid does not match the problem grid");
  if (m.dofs.coupling != spec.coupling || m.dofs.n_cells != n)
    throw ArgumentError("step_leapfrog: matrix was assembled for a different problem");
  if (!std::isfinite(dt) || dt == 0.0 || std::fabs(dt) > 0.5 * grid.h + 1e-12)
    throw ArgumentError("step_leapfrog: need 0 < |dt| <= 0.5 h = " + fmt(0.5 * grid.h));

  const bool trace = spec.coupling == Coupling::Trace;
  const int dim = m.dofs.dim;
  const double half = 0.5 * dt;

  std::vector<double> p(static_cast<std::size_t>(dim)), vel(static_cast<std::size_t>(dim)),
      acc(static_cast<std::size_t>(dim));
  for (int i = 0; i <= n; ++i) {
    p[static_cast<std::size_t>(i)] = state.u.values[i];
    vel[static_cast<std::size_t>(i)] = state.v.values[i];
  }
  if (trace) {
    p[0] = state.x.at0;
    p[static_cast<std::size_t>(n)] = state.x.at1;
    vel[0] = state.xdot.at0;
    vel[static_cast<std::size_t>(n)] = state.xdot.at1;
  } else {
    p[static_cast<std::size_t>(m.dofs.flux0())] = state.x.at0;
    p[static_cast<std::size_t>(m.dofs.flux1())] = state.x.at1;
    vel[static_cast<std::size_t>(m.dofs.flux0())] = state.xdot.at0;
    vel[static_cast<std::size_t>(m.dofs.flux1())] = state.xdot.at1;
  }

  // After the plain kick, vel[i] holds v_old + half * a[i]; a velocity force
  // kappa * w turns the update into w = (v_old + half a) / (1 - half kappa),
  // solved exactly since the force is linear in the own velocity.
  auto kick = [&]() {
    kernels::parallel_for(static_cast<std::size_t>(dim),
                          [&](std::size_t i) { vel[i] += half * acc[i]; });
    if (trace) {
      const double k0 = spec.damp_c0 + spec.damp_ct0;
      const double k1 = spec.damp_c1 + spec.damp_ct1;
      if (k0 != 0.0) vel[0] /= kick_denom(half, k0);
      if (k1 != 0.0) vel[static_cast<std::size_t>(n)] /= kick_denom(half, k1);
    } else {
      // Flux forces may also couple to the (final) node velocities.
      const std::size_t f0 = static_cast<std::size_t>(m.dofs.flux0());
      const std::size_t f1 = static_cast<std::size_t>(m.dofs.flux1());
      if (spec.ac_r0 != 0.0 || spec.ac_p0 != 0.0)
        vel[f0] = (vel[f0] + half * spec.ac_p0 * vel[0]) / kick_denom(half, spec.ac_r0);
      if (spec.ac_r1 != 0.0 || spec.ac_p1 != 0.0)
        vel[f1] = (vel[f1] + half * spec.ac_p1 * vel[static_cast<std::size_t>(n)]) /
                  kick_denom(half, spec.ac_r1);
    }
  };

  kernels::matvec_support(m.support, p.data(), acc.data());
  kick();
  kernels::parallel_for(static_cast<std::size_t>(dim),
                        [&](std::size_t i) { p[i] += dt * vel[i]; });
  kernels::matvec_support(m.support, p.data(), acc.data());
  kick();

  for (int i = 0; i <= n; ++i) {
    state.u.values[i] = p[static_cast<std::size_t>(i)];
    state.v.values[i] = vel[static_cast<std::size_t>(i)];
  }
  if (trace) {
    state.x = {p[0], p[static_cast<std::size_t>(n)]};
    state.xdot = {vel[0], vel[static_cast<std::size_t>(n)]};
  } else {
    state.x = {p[static_cast<std::size_t>(m.dofs.flux0())],
               p[static_cast<std::size_t>(m.dofs.flux1())]};
    state.xdot = {vel[static_cast<std::size_t>(m.dofs.flux0())],
                  vel[static_cast<std::size_t>(m.dofs.flux1())]};
  }

  double extreme = 0.0;
  for (double w : p) extreme = std::max(extreme, std::fabs(w));
  for (double w : vel) extreme = std::max(extreme, std::fabs(w));
  if (!std::isfinite(extreme))
    throw BlowUpError("time integration produced a non-finite value", step_index);
}

Trajectory simulate(const ProblemSpec& spec, const Grid& grid, const GridFunction& f,
                    const GridFunction& g, const BoundaryPair& h, const BoundaryPair& j,
                    double T, double dt, int sample_stride) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("simulate: T must be positive");
  if (sample_stride < 1) throw ArgumentError("simulate: sample_stride must be >= 1");
  if (dt <= 0.0) dt = 0.5 * grid.h;
  if (dt > 0.5 * grid.h + 1e-12)
    throw ArgumentError("simulate: dt exceeds the stability bound 0.5 h");

  const OperatorMatrix m = assemble(spec, grid);
  PhaseState state = init_state(f, g, h, j, spec);
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));

  const bool trace = spec.coupling == Coupling::Trace;
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps / sample_stride) + 2);

  auto record = [&](long k) {
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.push_back(state);
    traj.energies.push_back(trace ? energy(state, spec) : flux_energy(state, spec));
  };
  record(0);
  for (long k = 1; k <= steps; ++k) {
    step_leapfrog(state, dt, spec, m, k);
    if (k % sample_stride == 0) record(k);
  }
  return traj;
}

double energy(const PhaseState& s, const ProblemSpec& spec) {
  if (spec.coupling != Coupling::Trace)
    throw ArgumentError("energy: defined for the trace coupling (use flux_energy)");
  if (!(s.u.grid == spec.grid()))
    throw ArgumentError("energy: state grid does not match the problem grid");

  const Grid& grid = s.u.grid;
  const int n = grid.n_cells;
  GridFunction kin = GridFunction::zero(grid);
  GridFunction pot = GridFunction::zero(grid);
  for (int i = 0; i <= n; ++i) {
    kin.values[i] = s.v.values[i] * s.v.values[i];
    pot.values[i] = spec.r_coef.values[i] * s.u.values[i] * s.u.values[i];
  }
  const double grad = sobolev_seminorm(s.u);
  return 0.5 * trapezoid(grid, kin.values) +
         0.5 * (s.xdot.at0 * s.xdot.at0 + s.xdot.at1 * s.xdot.at1) +
         0.5 * grad * grad - 0.5 * trapezoid(grid, pot.values) -
         0.5 * (spec.beta0 * s.u.values[0] * s.u.values[0] +
                spec.beta1 * s.u.values[n] * s.u.values[n]);
}

double flux_energy(const PhaseState& s, const ProblemSpec& spec) {
  if (spec.coupling != Coupling::NormalDerivative)
    throw ArgumentError("flux_energy: defined for the normal-derivative coupling");
  if (!(s.u.grid == spec.grid()))
    throw ArgumentError("flux_energy: state grid does not match the problem grid");

  const Grid& grid = s.u.grid;
  GridFunction kin = GridFunction::zero(grid);
  GridFunction pot = GridFunction::zero(grid);
  for (int i = 0; i <= grid.n_cells; ++i) {
    kin.values[i] = s.v.values[i] * s.v.values[i];
    pot.values[i] = spec.r_coef.values[i] * s.u.values[i] * s.u.values[i];
  }
  const double grad = sobolev_seminorm(s.u);
  return 0.5 * trapezoid(grid, kin.values) + 0.5 * grad * grad -
         0.5 * trapezoid(grid, pot.values) +
         0.5 * (s.xdot.at0 * s.xdot.at0 + std::fabs(spec.ac_q0) * s.x.at0 * s.x.at0) +
         0.5 * (s.xdot.at1 * s.xdot.at1 + std::fabs(spec.ac_q1) * s.x.at1 * s.x.at1);
}

PhaseState closed_form_trace_solution(const GridFunction& f, const GridFunction& g,
                                      const BoundaryPair& h, const BoundaryPair& j,
                                      double t, const Grid& grid) {
  if (!(f.grid == grid) || !(g.grid == grid))
    throw ArgumentError("closed_form_trace_solution: data grids do not match");
  if (!std::isfinite(t)) throw ArgumentError("closed_form_trace_solution: non-finite time");
  if (std::fabs(f.at0() - h.at0) > 1e-10 || std::fabs(f.at1() - h.at1) > 1e-10)
    throw ArgumentError("closed_form_trace_solution: f traces do not match h");

  const GridFunction lift_h = dirichlet_closed_form(0.0, h, grid).profile;
  const GridFunction lift_j = dirichlet_closed_form(0.0, j, grid).profile;
  const int n = grid.n_cells;

  GridFunction wf = GridFunction::zero(grid), wg = GridFunction::zero(grid);
  for (int i = 0; i <= n; ++i) {
    wf.values[i] = f.values[i] - lift_h.values[i];
    wg.values[i] = g.values[i] - lift_j.values[i];
  }
  const ExtendedFunction ef(wf), eg(wg);

  auto field_at = [&](double s) {
    GridFunction cu = cosine_apply(ef, s);
    GridFunction su = sine_apply(eg, s);
    GridFunction u = GridFunction::zero(grid);
    for (int i = 0; i <= n; ++i)
      u.values[i] = cu.values[i] + lift_h.values[i] + su.values[i] + s * lift_j.values[i];
    return u;
  };

  PhaseState out{field_at(t), GridFunction::zero(grid),
                 BoundaryPair{h.at0 + t * j.at0, h.at1 + t * j.at1}, j};
  // Velocity by a centered kernel difference in time (O(h^2)).
  const double delta = grid.h;
  GridFunction up = field_at(t + delta), um = field_at(t - delta);
  for (int i = 0; i <= n; ++i)
    out.v.values[i] = (up.values[i] - um.values[i]) / (2.0 * delta);
  return out;
}

PhaseState inhomogeneous_bc_solution(const BoundaryPair& psi, const BoundaryPair& xi,
                                     const GridFunction& f, const GridFunction& g,
                                     const BoundaryPair& j, double t, const Grid& grid) {
  if (std::fabs(j.at0 - psi.at0) > 1e-12 || std::fabs(j.at1 - psi.at1) > 1e-12)
    throw ArgumentError("inhomogeneous_bc_solution: boundary velocity j = (" + fmt(j.at0) +
                        ", " + fmt(j.at1) + ") must equal the boundary slope psi = (" +
                        fmt(psi.at0) + ", " + fmt(psi.at1) + ")");
  return closed_form_trace_solution(f, g, xi, j, t, grid);
}

double periodicity_defect(const Trajectory& traj, double period) {
  if (traj.times.size() < 2) throw ArgumentError("periodicity_defect: too few samples");
  if (!(period > 0.0)) throw ArgumentError("periodicity_defect: period must be positive");
  const double dt_s = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i + 1 < traj.times.size(); ++i)
    if (std::fabs(traj.times[i + 1] - traj.times[i] - dt_s) > 1e-9)
      throw ArgumentError("periodicity_defect: samples are not uniformly spaced");

  const double ratio = period / dt_s;
  const long m = std::lround(ratio);
  if (m < 1 || std::fabs(static_cast<double>(m) * dt_s - period) > 1e-9)
    throw ArgumentError("periodicity_defect: period does not align with the sample spacing");
  if (traj.times.size() <= static_cast<std::size_t>(m))
    throw ArgumentError("periodicity_defect: trajectory shorter than one period");

  const double norm0 = std::max(lp_norm(traj.states[0].u, 2.0), 1e-300);
  const Grid& grid = traj.states[0].u.grid;
  double worst = 0.0;
  for (std::size_t i = 0; i + static_cast<std::size_t>(m) < traj.states.size(); ++i) {
    GridFunction diff = GridFunction::zero(grid);
    const auto& a = traj.states[i].u.values;
    const auto& b = traj.states[i + static_cast<std::size_t>(m)].u.values;
    for (int k = 0; k <= grid.n_cells; ++k) diff.values[k] = b[k] - a[k];
    worst = std::max(worst, lp_norm(diff, 2.0) / norm0);
  }
  return worst;
}

double recurrence_defect(const Trajectory& traj, double window_lo, double window_hi) {
  if (traj.times.empty()) throw ArgumentError("recurrence_defect: empty trajectory");
  if (!(window_lo <= window_hi)) throw ArgumentError("recurrence_defect: bad window");

  const Grid& grid = traj.states[0].u.grid;
  const double denom =
      std::max(lp_norm(traj.states[0].u, 2.0) + lp_norm(traj.states[0].v, 2.0), 1e-300);

  double best = -1.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < window_lo || traj.times[i] > window_hi) continue;
    GridFunction du = GridFunction::zero(grid), dv = GridFunction::zero(grid);
    for (int k = 0; k <= grid.n_cells; ++k) {
      du.values[k] = traj.states[i].u.values[k] - traj.states[0].u.values[k];
      dv.values[k] = traj.states[i].v.values[k] - traj.states[0].v.values[k];
    }
    const double d = (lp_norm(du, 2.0) + lp_norm(dv, 2.0)) / denom;
    if (best < 0.0 || d < best) best = d;
  }
  if (best < 0.0) throw ArgumentError("recurrence_defect: no samples inside the window");
  return best;
}

double sine_coefficient_slope(const GridFunction& u) {
  const Grid& grid = u.grid;
  const int n = grid.n_cells;
  const int kmax = std::max(4, n / 4);

  std::vector<double> mag(static_cast<std::size_t>(kmax));
  double cmax = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    double c = 0.0;
    for (int i = 1; i < n; ++i)
      c += u.values[i] * std::sin(static_cast<double>(k) * M_PI * grid.node(i));
    c *= 2.0 * grid.h;
    mag[static_cast<std::size_t>(k - 1)] = std::fabs(c);
    cmax = std::max(cmax, std::fabs(c));
  }

  // Fit only coefficients that rise above the round-off floor; points sitting
  // on the noise plateau (exact zeros of symmetric data, fully decayed tails)
  // would otherwise flatten the slope regardless of the data's smoothness.
  const double floor_abs = std::max(1e-18, 1e-13 * cmax);
  std::vector<int> keep;
  for (int k = 1; k <= kmax; ++k)
    if (mag[static_cast<std::size_t>(k - 1)] > floor_abs) keep.push_back(k);
  if (keep.size() < 2) keep = {1, 2}; // single-mode or zero data: degenerate fit

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k : keep) {
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(std::max(mag[static_cast<std::size_t>(k - 1)], 1e-18));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dk = static_cast<double>(keep.size());
  return (dk * sxy - sx * sy) / (dk * sxx - sx * sx);
}

std::vector<double> smoothness_diagnostic(const Trajectory& traj) {
  std::vector<double> slopes;
  slopes.reserve(traj.states.size());
  for (const auto& s : traj.states) slopes.push_back(sine_coefficient_slope(s.u));
  return slopes;
}

} // namespace dynwave
