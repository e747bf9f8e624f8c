// Acceptance gate: one pass/fail line per criterion, with the measured values
// and the pinned tolerances. Exits with the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "dynwave/config.hpp"
#include "dynwave/dalembert.hpp"
#include "dynwave/errors.hpp"
#include "dynwave/evolve.hpp"
#include "dynwave/grid.hpp"
#include "dynwave/presets.hpp"
#include "dynwave/report.hpp"
#include "dynwave/spectral.hpp"

using namespace dynwave;

namespace {

int g_failures = 0;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

void report(int idx, const std::string& title, bool pass, const std::string& detail,
            double seconds, double limit) {
  const bool in_time = limit <= 0.0 || seconds < limit;
  const bool ok = pass && in_time;
  std::string line = std::string("[") + (ok ? "PASS" : "FAIL") + "] criterion " +
                     std::to_string(idx) + ": " + title + " — " + detail +
                     "; runtime " + fmt(seconds) + " s";
  if (limit > 0.0) line += " (limit " + fmt(limit) + " s" + (in_time ? "" : ", exceeded") + ")";
  std::puts(line.c_str());
  if (!ok) ++g_failures;
}

// Runs a preset and reduces its verdicts to one line. Extra named notes can
// be appended by the caller; any thrown error fails the criterion honestly.
struct PresetOutcome {
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  ExperimentResult result;
};

PresetOutcome run_preset_criterion(const std::string& name) {
  PresetOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    out.result = run_preset(name);
    out.pass = out.result.all_passed();
    for (const auto& v : out.result.verdicts) {
      if (!out.detail.empty()) out.detail += ", ";
      out.detail += v.name + " " + fmt(v.measured) + " (tol " + fmt(v.tolerance) + ")" +
                    (v.pass ? "" : " FAIL");
    }
  } catch (const Error& e) {
    out.pass = false;
    out.detail = std::string("error: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// criterion 2: decoupled interior spectrum at N = 400

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  try {
    Grid grid(400);
    ProblemSpec spec(grid); // decoupled: all couplings zero
    const auto evs = eigs(assemble(spec, grid));
    std::vector<double> neg;
    for (const auto& ev : evs)
      if (std::abs(ev.imag()) <= 1e-8 * std::max(1.0, std::abs(ev.real())) &&
          ev.real() < -1e-6)
        neg.push_back(ev.real());
    std::sort(neg.begin(), neg.end(), std::greater<double>());

    double worst_cont = 0.0, worst_disc = 0.0;
    const double h = grid.h;
    for (int k = 1; k <= 5; ++k) {
      const double got = neg[static_cast<std::size_t>(k - 1)];
      const double cont = -static_cast<double>(k) * k * M_PI * M_PI;
      const double s = std::sin(0.5 * k * M_PI * h);
      const double disc = -4.0 / (h * h) * s * s;
      worst_cont = std::max(worst_cont, std::abs(got - cont) / std::abs(cont));
      worst_disc = std::max(worst_disc, std::abs(got - disc) / std::abs(disc));
    }
    pass = worst_cont <= 2e-3 && worst_disc <= 1e-8;
    detail = "first five interior eigenvalues vs -k^2 pi^2 rel err " + fmt(worst_cont) +
             " (tol 0.002), vs closed-form discrete spectrum rel err " + fmt(worst_disc) +
             " (tol 1e-08)";
  } catch (const Error& e) {
    pass = false;
    detail = std::string("error: ") + e.what();
  }
  report(2, "decoupled Dirichlet spectrum", pass, detail, elapsed(t0), 10.0);
}

// ---------------------------------------------------------------------------
// criterion 9: kernel functional-equation suite on random zero-trace data

void criterion_9() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  try {
    Grid grid(64);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_int_distribution<int> shift(0, 2 * grid.n_cells); // t in [0, 2]

    double worst_func = 0.0, worst_even = 0.0, worst_ident = 0.0, worst_ftc = 0.0;
    auto max_diff = [&](const GridFunction& a, const GridFunction& b) {
      double m = 0.0;
      for (int i = 0; i <= grid.n_cells; ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
      return m;
    };

    for (int draw = 0; draw < 200; ++draw) {
      GridFunction f = GridFunction::zero(grid);
      for (int i = 1; i < grid.n_cells; ++i) f.values[i] = amp(rng);
      const double t = shift(rng) * grid.h;
      const double s = shift(rng) * grid.h;

      // d'Alembert functional equation 2 C(t) C(s) f = C(t+s) f + C(t-s) f
      GridFunction lhs = cosine_apply(cosine_apply(f, s), t);
      for (auto& v : lhs.values) v *= 2.0;
      GridFunction rhs = cosine_apply(f, t + s);
      const GridFunction other = cosine_apply(f, t - s);
      for (int i = 0; i <= grid.n_cells; ++i) rhs.values[i] += other.values[i];
      worst_func = std::max(worst_func, max_diff(lhs, rhs));

      worst_even = std::max(worst_even, max_diff(cosine_apply(f, t), cosine_apply(f, -t)));
      worst_ident = std::max(worst_ident, max_diff(cosine_apply(f, 0.0), f));

      // discrete fundamental theorem: (S(t+h) - S(t))/h = (C(t) + C(t+h))/2
      GridFunction dS = sine_apply(f, t + grid.h);
      const GridFunction St = sine_apply(f, t);
      for (int i = 0; i <= grid.n_cells; ++i)
        dS.values[i] = (dS.values[i] - St.values[i]) / grid.h;
      GridFunction Cmid = cosine_apply(f, t);
      const GridFunction Cnext = cosine_apply(f, t + grid.h);
      for (int i = 0; i <= grid.n_cells; ++i)
        Cmid.values[i] = 0.5 * (Cmid.values[i] + Cnext.values[i]);
      worst_ftc = std::max(worst_ftc, max_diff(dS, Cmid));
    }
    const double worst = std::max({worst_func, worst_even, worst_ident, worst_ftc});
    pass = worst <= 1e-10;
    detail = "200 random zero-trace draws: functional equation " + fmt(worst_func) +
             ", evenness " + fmt(worst_even) + ", C(0)=I " + fmt(worst_ident) +
             ", sine-derivative identity " + fmt(worst_ftc) + " (all tol 1e-10)";
  } catch (const Error& e) {
    pass = false;
    detail = std::string("error: ") + e.what();
  }
  report(9, "d'Alembert functional-equation suite", pass, detail, elapsed(t0), 0.0);
}

// ---------------------------------------------------------------------------
// criterion 11: smoothness preservation for a C^inf bump

void criterion_11() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  try {
    Grid grid(200);
    RunConfig cfg;
    const GridFunction f = build_initial_data("bump", cfg, grid);
    const double slope0 = sine_coefficient_slope(f);

    // Route 1: exact kernel path, u(1) = C(1) f.
    const double slope_kernel = sine_coefficient_slope(cosine_apply(f, 1.0));

    // Route 2: leapfrog path sampled at t = 0 and t = 1 only.
    ProblemSpec spec(grid);
    const GridFunction g0 = GridFunction::zero(grid);
    const int steps = static_cast<int>(std::lround(1.0 / (0.5 * grid.h)));
    Trajectory traj = simulate(spec, grid, f, g0, BoundaryPair{0.0, 0.0},
                               BoundaryPair{0.0, 0.0}, 1.0, 0.0, steps);
    const std::vector<double> slopes = smoothness_diagnostic(traj);
    const double slope_leapfrog = slopes.back();

    const double dev_kernel = std::abs(slope_kernel - slope0);
    const double dev_leapfrog = std::abs(slope_leapfrog - slope0);
    pass = dev_kernel <= 1.0 && dev_leapfrog <= 1.0;
    detail = "sine-coefficient slope at t=0 " + fmt(slope0) + "; kernel route t=1 drift " +
             fmt(dev_kernel) + ", leapfrog route t=1 drift " + fmt(dev_leapfrog) +
             " (tol 1 each)";
  } catch (const Error& e) {
    pass = false;
    detail = std::string("error: ") + e.what();
  }
  report(11, "smoothness preservation", pass, detail, elapsed(t0), 0.0);
}

} // namespace

int main() {
  std::puts("acceptance: wave equations with dynamical boundary conditions");

  {
    PresetOutcome o = run_preset_criterion("prop73_3");
    report(1, "period-2 solutions (decoupled model)", o.pass, o.detail, o.seconds, 5.0);
  }
  criterion_2();
  {
    PresetOutcome o = run_preset_criterion("charroots_match");
    std::string detail = o.detail;
    if (!o.pass) {
      // The forward residual is dominated by the deepest in-window root: the
      // characteristic derivative there is O(10^2) and the discrete
      // eigenvalue carries an O(sigma^4 h^2 / 12) dispersion shift, so the
      // product at N = 200 sits around 2, not 0.05; scaling h^-2 puts the
      // required resolution near N ~ 1300, far beyond the pinned runtime
      // budget. The refinement ratio and the converse matching stay sound.
      detail += " | note: forward residual bound is unattainable at N=200; see ledger";
    }
    report(3, "characteristic equation vs assembled spectrum", o.pass, detail, o.seconds,
           30.0);
  }
  {
    PresetOutcome o = run_preset_criterion("prop71_decay");
    report(4, "Dirichlet-lift norm decay exponents", o.pass, o.detail, o.seconds, 5.0);
  }
  {
    PresetOutcome o = run_preset_criterion("miyadera");
    report(5, "boundary-flux integral constant", o.pass, o.detail, o.seconds, 1.0);
  }
  {
    PresetOutcome o = run_preset_criterion("factorization");
    report(6, "shifted-operator factorization identity", o.pass, o.detail, o.seconds, 5.0);
  }
  {
    PresetOutcome o = run_preset_criterion("blockformula");
    report(7, "block kernel formula, growth and boundedness", o.pass, o.detail, o.seconds,
           0.0);
  }
  {
    PresetOutcome o = run_preset_criterion("prop73_2");
    report(8, "energy conservation, dissipation, boundedness", o.pass, o.detail, o.seconds,
           0.0);
  }
  criterion_9();
  {
    PresetOutcome o = run_preset_criterion("acoustic1d");
    report(10, "acoustic boundary mode", o.pass, o.detail, o.seconds, 0.0);
  }
  criterion_11();

  if (g_failures == 0)
    std::puts("acceptance: all criteria passed");
  else
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return g_failures;
}
