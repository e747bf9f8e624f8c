#pragma once

#include <cstddef>
#include <vector>

namespace dynwave::kernels {

/// Execution policy. Auto picks Parallel only when the work is large enough
/// to amortize the fork/join and OpenMP is actually available.
enum class Exec { Serial, Parallel, Auto };

/// Thread cap: min(OpenMP max threads, DYNWAVE_THREADS if set). 1 without OpenMP.
int max_threads();

/// Decide whether a kernel with `work` flops-ish units should run parallel.
bool use_parallel(Exec mode, std::size_t work);

/// Row-compressed storage for sparse operator application in the time loop.
/// Keeps exactly the nonzero entries of a dense row-major matrix, row by row,
/// in column order, so matvec accumulates in the same order as the dense loop.
struct RowSupport {
  int rows = 0;
  std::vector<int> offsets; // rows+1 prefix offsets into cols/vals
  std::vector<int> cols;
  std::vector<double> vals;

  static RowSupport from_dense(const std::vector<double>& a, int n);
};

/// y = A x, dense row-major n-by-n. Parallel over rows; each row accumulates
/// serially left to right, so the result is bitwise identical to serial::.
void matvec_dense(const std::vector<double>& a, int n, const double* x, double* y,
                  Exec mode = Exec::Auto);

/// y = A x for row-compressed A; same bitwise-reproducibility guarantee.
void matvec_support(const RowSupport& a, const double* x, double* y,
                    Exec mode = Exec::Auto);

/// y += alpha * x, elementwise (no cross-element reduction).
void axpy(double alpha, const double* x, double* y, std::size_t n,
          Exec mode = Exec::Auto);

/// Reference implementations used by tests and the benchmark baseline.
namespace serial {
void matvec_dense(const std::vector<double>& a, int n, const double* x, double* y);
void matvec_support(const RowSupport& a, const double* x, double* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
} // namespace serial

/// Static-schedule parallel map over [0, n). f must be safe to run per-index
/// with no cross-index accumulation (bitwise determinism is on the caller).
template <class F>
void parallel_for(std::size_t n, F&& f, Exec mode = Exec::Auto, std::size_t grain = 1) {
  if (use_parallel(mode, n * grain)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) f(i);
  }
}

} // namespace dynwave::kernels
