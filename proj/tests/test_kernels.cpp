#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dynwave/kernels.hpp"
#include "oracles.hpp"

using namespace dynwave;
using kernels::Exec;
using kernels::RowSupport;

namespace {

std::vector<double> random_matrix(int n, unsigned seed) {
  return oracle::random_values(n * n, -1.0, 1.0, seed);
}

// Tridiagonal-with-boundary-rows pattern similar to the assembled operators.
std::vector<double> banded_matrix(int n, unsigned seed) {
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  auto r = oracle::random_values(3 * n, -2.0, 2.0, seed);
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i) * n + i] = r[3 * i];
    if (i > 0) a[static_cast<std::size_t>(i) * n + i - 1] = r[3 * i + 1];
    if (i + 1 < n) a[static_cast<std::size_t>(i) * n + i + 1] = r[3 * i + 2];
  }
  a[0 * n + 2] = 0.7;
  a[static_cast<std::size_t>(n - 1) * n + n - 3] = -0.4;
  return a;
}

} // namespace

TEST_CASE("parallel dense matvec is bitwise identical to serial") {
  for (int n : {7, 64, 301}) {
    auto a = random_matrix(n, 11 + n);
    auto x = oracle::random_values(n, -3.0, 3.0, 5 + n);
    std::vector<double> ys(n), yp(n);
    kernels::serial::matvec_dense(a, n, x.data(), ys.data());
    kernels::matvec_dense(a, n, x.data(), yp.data(), Exec::Parallel);
    for (int i = 0; i < n; ++i) CHECK(ys[i] == yp[i]);
  }
}

TEST_CASE("row-compressed matvec matches dense bitwise") {
  for (int n : {8, 100, 257}) {
    auto a = banded_matrix(n, 42 + n);
    auto s = RowSupport::from_dense(a, n);
    auto x = oracle::random_values(n, -1.0, 1.0, 3 + n);
    std::vector<double> yd(n), ys(n), yp(n);
    kernels::serial::matvec_dense(a, n, x.data(), yd.data());
    kernels::serial::matvec_support(s, x.data(), ys.data());
    kernels::matvec_support(s, x.data(), yp.data(), Exec::Parallel);
    for (int i = 0; i < n; ++i) {
      CHECK(yd[i] == ys[i]);
      CHECK(ys[i] == yp[i]);
    }
  }
}

TEST_CASE("row support stores exactly the nonzeros") {
  const int n = 50;
  auto a = banded_matrix(n, 9);
  auto s = RowSupport::from_dense(a, n);
  std::size_t nnz = 0;
  for (double v : a) nnz += (v != 0.0);
  CHECK(s.vals.size() == nnz);
  CHECK(s.offsets.front() == 0);
  CHECK(s.offsets.back() == static_cast<int>(nnz));
}

TEST_CASE("axpy parallel equals serial bitwise") {
  const std::size_t n = 40000;
  auto x = oracle::random_values(static_cast<int>(n), -1, 1, 21);
  auto y0 = oracle::random_values(static_cast<int>(n), -1, 1, 22);
  auto ys = y0, yp = y0;
  kernels::serial::axpy(0.37, x.data(), ys.data(), n);
  kernels::axpy(0.37, x.data(), yp.data(), n, Exec::Parallel);
  for (std::size_t i = 0; i < n; ++i) CHECK(ys[i] == yp[i]);
}

TEST_CASE("parallel_for covers every index exactly once") {
  const std::size_t n = 10007;
  std::vector<int> hits(n, 0);
  kernels::parallel_for(n, [&](std::size_t i) { hits[i] += 1; }, Exec::Parallel);
  for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
}

TEST_CASE("thread cap respects the environment") {
  CHECK(kernels::max_threads() >= 1);
  CHECK_FALSE(kernels::use_parallel(Exec::Serial, 1u << 30));
}
