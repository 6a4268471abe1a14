#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gsfw/lanczos.hpp"
#include "support/oracles.hpp"

using namespace gsfw;

namespace {

SymOp wrap(const oracle::DenseSym& m) {
  return SymOp{m.n, [&m](const double* x, double* y) { m.matvec(x, y); }};
}

}  // namespace

TEST_CASE("diagonal operator: exact top eigenpair") {
  oracle::DenseSym m(3);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 2.0;
  m.at(2, 2) = 3.0;
  Rng rng(1);
  auto res = lanczos_max_eigvec(wrap(m), 0.5, 0.1, rng);
  CHECK(res.lambda == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(std::abs(res.h[2]) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(res.h[0]) < 1e-6);
}

TEST_CASE("identity operator: one step suffices") {
  oracle::DenseSym m(10);
  for (int i = 0; i < 10; ++i) m.at(i, i) = 1.0;
  Rng rng(2);
  auto res = lanczos_max_eigvec(wrap(m), 1.0, 0.5, rng);
  CHECK(res.lambda == doctest::Approx(1.0).epsilon(1e-12));
  double norm = 0.0;
  for (double x : res.h) norm += x * x;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.breakdown);  // Krylov space collapses immediately
}

TEST_CASE("tridiagonal eigensolver against Jacobi on random symmetric tridiagonals") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t q = 2 + static_cast<std::size_t>(rng.uniform() * 12);
    std::vector<double> d(q), e(q, 0.0), z(q * q, 0.0);
    oracle::DenseSym dense(static_cast<int>(q));
    for (std::size_t i = 0; i < q; ++i) {
      d[i] = rng.normal();
      dense.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
      z[i * q + i] = 1.0;
    }
    for (std::size_t i = 0; i + 1 < q; ++i) {
      e[i] = rng.normal();
      dense.set_sym(static_cast<int>(i), static_cast<int>(i) + 1, e[i]);
    }
    tridiag_eigen(q, d.data(), e.data(), z.data());
    auto ref = oracle::jacobi_eigen(dense);
    std::sort(d.begin(), d.end());
    for (std::size_t i = 0; i < q; ++i) CHECK(d[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  }
}

TEST_CASE("accuracy guarantee on random symmetric operators") {
  // The acceptance suite runs the full 100-trial version; this is a fast
  // regression at n = 30.
  Rng rng(4);
  int hits = 0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    oracle::DenseSym m(30);
    for (int i = 0; i < 30; ++i)
      for (int j = i; j < 30; ++j) m.set_sym(i, j, rng.normal());
    auto ev = oracle::jacobi_eigen(m);
    const double lmax = ev.back();
    const double norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
    Rng lrng(100 + t);
    auto res = lanczos_max_eigvec(wrap(m), 0.1, 0.01, lrng);
    if (res.lambda >= lmax - 0.1 / 8.0 * norm) ++hits;
  }
  CHECK(hits >= trials - 1);
}

TEST_CASE("iteration count follows the accuracy parameters") {
  oracle::DenseSym m(50);
  Rng rng(5);
  for (int i = 0; i < 50; ++i)
    for (int j = i; j < 50; ++j) m.set_sym(i, j, rng.normal());
  Rng r1(6), r2(7);
  auto coarse = lanczos_max_eigvec(wrap(m), 1.0, 0.5, r1);
  auto fine = lanczos_max_eigvec(wrap(m), 0.01, 0.01, r2);
  CHECK(coarse.iterations < fine.iterations);
  CHECK(fine.iterations <= 50);  // capped at n
  // q >= 1/2 + log(n/p^2)/sqrt(rho)
  const double expect = 0.5 + std::log(50.0 / 0.25) / 1.0;
  CHECK(coarse.iterations >= static_cast<int>(expect));
}

TEST_CASE("rank-one operator triggers early breakdown with the exact pair") {
  const int n = 12;
  std::vector<double> dir(n);
  Rng rng(8);
  double norm = 0.0;
  for (double& x : dir) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : dir) x /= norm;
  SymOp op{n, [&dir, n](const double* x, double* y) {
             double c = 0.0;
             for (int i = 0; i < n; ++i) c += dir[i] * x[i];
             for (int i = 0; i < n; ++i) y[i] = 2.5 * c * dir[i];
           }};
  auto res = lanczos_max_eigvec(op, 0.01, 0.01, rng);
  CHECK(res.lambda == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(res.breakdown);
  double dot = 0.0;
  for (int i = 0; i < n; ++i) dot += res.h[i] * dir[i];
  CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("parameter validation") {
  oracle::DenseSym m(3);
  Rng rng(9);
  CHECK_THROWS(lanczos_max_eigvec(wrap(m), 0.0, 0.1, rng));
  CHECK_THROWS(lanczos_max_eigvec(wrap(m), 0.5, 0.9, rng));
}
