#include "dynwave/kernels.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dynwave::kernels {

int max_threads() {
#ifdef _OPENMP
  static const int cap = [] {
    int n = omp_get_max_threads();
    if (const char* s = std::getenv("DYNWAVE_THREADS")) {
      int v = std::atoi(s);
      if (v > 0) n = std::min(v, n);
    }
    return n;
  }();
  return cap;
#else
  return 1;
#endif
}

bool use_parallel(Exec mode, std::size_t work) {
  if (max_threads() <= 1) return false;
  switch (mode) {
    case Exec::Serial: return false;
    case Exec::Parallel: return true;
    case Exec::Auto: return work >= 32768;
  }
  return false;
}

RowSupport RowSupport::from_dense(const std::vector<double>& a, int n) {
  RowSupport s;
  s.rows = n;
  s.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    const double* row = a.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j)
      if (row[j] != 0.0) {
        s.cols.push_back(j);
        s.vals.push_back(row[j]);
      }
    s.offsets[static_cast<std::size_t>(i) + 1] = static_cast<int>(s.cols.size());
  }
  return s;
}

namespace serial {

void matvec_dense(const std::vector<double>& a, int n, const double* x, double* y) {
  for (int i = 0; i < n; ++i) {
    const double* row = a.data() + static_cast<std::size_t>(i) * n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_support(const RowSupport& a, const double* x, double* y) {
  for (int i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (int k = a.offsets[i]; k < a.offsets[i + 1]; ++k)
      acc += a.vals[k] * x[a.cols[k]];
    y[i] = acc;
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace serial

void matvec_dense(const std::vector<double>& a, int n, const double* x, double* y,
                  Exec mode) {
  if (!use_parallel(mode, static_cast<std::size_t>(n) * n)) {
    serial::matvec_dense(a, n, x, y);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
  for (int i = 0; i < n; ++i) {
    const double* row = a.data() + static_cast<std::size_t>(i) * n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_support(const RowSupport& a, const double* x, double* y, Exec mode) {
  if (!use_parallel(mode, a.vals.size())) {
    serial::matvec_support(a, x, y);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
  for (int i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (int k = a.offsets[i]; k < a.offsets[i + 1]; ++k)
      acc += a.vals[k] * x[a.cols[k]];
    y[i] = acc;
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n, Exec mode) {
  if (!use_parallel(mode, n)) {
    serial::axpy(alpha, x, y, n);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    y[i] += alpha * x[i];
}

} // namespace dynwave::kernels
