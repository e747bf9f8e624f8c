// Timing harness comparing the serial reference kernels against the
// OpenMP-parallel ones, plus the two application-level hot loops (kernel
// application and a leapfrog step). Build and run:
//   cmake --build build --target bench_kernels && ./build/bench_kernels
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "dynwave/dalembert.hpp"
#include "dynwave/evolve.hpp"
#include "dynwave/grid.hpp"
#include "dynwave/kernels.hpp"
#include "dynwave/spectral.hpp"

using namespace dynwave;
namespace k = dynwave::kernels;

namespace {

double time_loop(int repeats, const std::function<void()>& body) {
  // warm-up pass, then best-of-3 timing
  body();
  double best = 1e300;
  for (int round = 0; round < 3; ++round) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) body();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, dt / repeats);
  }
  return best;
}

void line(const char* name, std::size_t work, double serial_s, double parallel_s) {
  std::printf("%-22s %12zu %12.3f %12.3f %10.2fx\n", name, work, serial_s * 1e6,
              parallel_s * 1e6, serial_s / parallel_s);
}

} // namespace

int main() {
  std::printf("threads available: %d\n\n", k::max_threads());
  std::printf("%-22s %12s %12s %12s %10s\n", "kernel", "work", "serial us",
              "parallel us", "speedup");

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // Dense and row-compressed matvec at a spectral-solver-like size.
  {
    const int n = 1200;
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (auto& v : a) v = u(rng);
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (auto& v : x) v = u(rng);
    const double ts = time_loop(20, [&] { k::serial::matvec_dense(a, n, x.data(), y.data()); });
    const double tp =
        time_loop(20, [&] { k::matvec_dense(a, n, x.data(), y.data(), k::Exec::Parallel); });
    line("matvec_dense", static_cast<std::size_t>(n) * n, ts, tp);

    const k::RowSupport rs = k::RowSupport::from_dense(a, n);
    const double ss = time_loop(20, [&] { k::serial::matvec_support(rs, x.data(), y.data()); });
    const double sp =
        time_loop(20, [&] { k::matvec_support(rs, x.data(), y.data(), k::Exec::Parallel); });
    line("matvec_support", rs.vals.size(), ss, sp);
  }

  // Sparse matvec at time-loop size (the assembled operator is 3-5 per row).
  {
    Grid grid(20000);
    ProblemSpec spec(grid);
    spec.alpha0 = 1.0;
    spec.alpha1 = -1.0;
    spec.beta0 = -1.0;
    spec.beta1 = -1.0;
    const OperatorMatrix m = assemble(spec, grid);
    std::vector<double> x(static_cast<std::size_t>(m.dofs.dim)),
        y(static_cast<std::size_t>(m.dofs.dim));
    for (auto& v : x) v = u(rng);
    const double ts =
        time_loop(200, [&] { k::serial::matvec_support(m.support, x.data(), y.data()); });
    const double tp = time_loop(
        200, [&] { k::matvec_support(m.support, x.data(), y.data(), k::Exec::Parallel); });
    line("assembled matvec", m.support.vals.size(), ts, tp);
  }

  // axpy at the same size.
  {
    const std::size_t n = 200001;
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    const double ts = time_loop(200, [&] { k::serial::axpy(0.37, x.data(), y.data(), n); });
    const double tp =
        time_loop(200, [&] { k::axpy(0.37, x.data(), y.data(), n, k::Exec::Parallel); });
    line("axpy", n, ts, tp);
  }

  // Application-level loops (these pick their own execution policy).
  {
    Grid grid(100000);
    GridFunction f = GridFunction::zero(grid);
    for (int i = 1; i < grid.n_cells; ++i) f.values[i] = u(rng);
    const ExtendedFunction ext(f);
    const double tc = time_loop(20, [&] { (void)cosine_apply(ext, 0.37); });
    const double tsn = time_loop(20, [&] { (void)sine_apply(ext, 0.37); });
    std::printf("%-22s %12d %12.3f %12s\n", "cosine_apply", grid.n_cells + 1, tc * 1e6, "-");
    std::printf("%-22s %12d %12.3f %12s\n", "sine_apply", grid.n_cells + 1, tsn * 1e6, "-");
  }
  {
    Grid grid(20000);
    ProblemSpec spec(grid);
    const OperatorMatrix m = assemble(spec, grid);
    GridFunction f = GridFunction::zero(grid);
    for (int i = 1; i < grid.n_cells; ++i) f.values[i] = u(rng);
    PhaseState state = init_state(f, GridFunction::zero(grid), BoundaryPair{0.0, 0.0},
                                  BoundaryPair{0.0, 0.0}, spec);
    const double dt = 0.5 * grid.h;
    long step = 0;
    const double tl = time_loop(200, [&] { step_leapfrog(state, dt, spec, m, step++); });
    std::printf("%-22s %12d %12.3f %12s\n", "step_leapfrog", grid.n_cells + 1, tl * 1e6, "-");
  }
  return 0;
}
