#pragma once

#include <cstddef>
#include <functional>

#include "gsfw/memlog.hpp"
#include "gsfw/rng.hpp"

namespace gsfw {

// Symmetric linear operator interface for the eigenvalue subproblem.
struct SymOp {
  int n = 0;
  std::function<void(const double*, double*)> apply;  // y = A x
};

struct LanczosResult {
  double lambda = 0.0;  // Rayleigh quotient of h (best Ritz value)
  tracked_vector<double> h;
  int iterations = 0;
  bool breakdown = false;  // exact invariant subspace reached early
};

// Reusable Krylov workspace; grows to the largest basis seen and keeps it.
struct LanczosWorkspace {
  tracked_vector<double> basis;  // q_cap * n, row-major
  tracked_vector<double> w;      // length n
  tracked_vector<double> alpha, beta;
  tracked_vector<double> tri_d, tri_e, tri_z;  // tridiagonal eigen scratch
};

// Approximate maximum eigenpair by Lanczos with full reorthogonalization,
// started from a random unit vector. Runs
//   q = ceil(1/2 + log(n / p^2) / sqrt(rho))
// iterations (capped at n, where exact termination is guaranteed, and at
// max_iters if positive), so that h^T A h >= lambda_max - (rho/8)||A||
// with probability at least 1 - 2p.
LanczosResult lanczos_max_eigvec(const SymOp& op, double rho, double p, Rng& rng,
                                 LanczosWorkspace& ws, int max_iters = 0);

// Convenience overload with a private workspace.
LanczosResult lanczos_max_eigvec(const SymOp& op, double rho, double p, Rng& rng,
                                 int max_iters = 0);

// Eigen-decomposition of a symmetric tridiagonal matrix (diagonal d,
// off-diagonal e), QL with implicit shifts. On return d holds eigenvalues,
// z the eigenvector matrix (column k = eigenvector of d[k]). z must come in
// as the q x q identity.
void tridiag_eigen(std::size_t q, double* d, double* e, double* z);

}  // namespace gsfw
