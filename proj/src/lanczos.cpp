#include "gsfw/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace gsfw {

// QL with implicit shifts on a symmetric tridiagonal matrix; EISPACK tql2
// lineage. d[0..q), e[0..q-1) sub-diagonal (e[q-1] unused), z is q x q
// row-major and must be the identity on entry.
void tridiag_eigen(std::size_t q, double* d, double* e, double* z) {
  if (q <= 1) return;
  e[q - 1] = 0.0;
  for (std::size_t l = 0; l < q; ++l) {
    std::size_t iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < q; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("tridiagonal QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < q; ++k) {
            f = z[k * q + i + 1];
            z[k * q + i + 1] = s * z[k * q + i] + c * f;
            z[k * q + i] = c * z[k * q + i] - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

namespace {

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LanczosResult lanczos_max_eigvec(const SymOp& op, double rho, double p, Rng& rng,
                                 LanczosWorkspace& ws, int max_iters) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must be in (0,1]");
  if (!(p > 0.0 && p <= 0.5)) throw std::invalid_argument("p must be in (0,1/2]");
  const int n = op.n;
  if (n <= 0) throw std::invalid_argument("operator dimension must be positive");

  double q_target = 0.5 + std::log(static_cast<double>(n) / (p * p)) / std::sqrt(rho);
  int q_cap = static_cast<int>(std::min<double>(std::ceil(q_target), n));
  q_cap = std::max(q_cap, 1);
  if (max_iters > 0) q_cap = std::min(q_cap, max_iters);

  const std::size_t nn = static_cast<std::size_t>(n);
  if (ws.basis.size() < static_cast<std::size_t>(q_cap) * nn)
    ws.basis.resize(static_cast<std::size_t>(q_cap) * nn);
  ws.w.resize(nn);
  ws.alpha.resize(static_cast<std::size_t>(q_cap));
  ws.beta.resize(static_cast<std::size_t>(q_cap));

  // Random unit start.
  double* v0 = ws.basis.data();
  double norm = 0.0;
  do {
    for (std::size_t i = 0; i < nn; ++i) v0[i] = rng.normal();
    norm = std::sqrt(dot(v0, v0, n));
  } while (norm == 0.0);
  for (std::size_t i = 0; i < nn; ++i) v0[i] /= norm;

  LanczosResult res;
  int q = 0;
  double* w = ws.w.data();
  for (int j = 0; j < q_cap; ++j) {
    const double* vj = ws.basis.data() + static_cast<std::size_t>(j) * nn;
    op.apply(vj, w);
    double a = dot(vj, w, n);
    ws.alpha[static_cast<std::size_t>(j)] = a;
    q = j + 1;
    if (j + 1 == q_cap) break;

    // w <- w - alpha_j v_j - beta_{j-1} v_{j-1}, then reorthogonalize against
    // the whole basis; a second pass only when the first one cancelled most
    // of the vector (the usual twice-is-enough criterion).
    for (std::size_t i = 0; i < nn; ++i) w[i] -= a * vj[i];
    if (j > 0) {
      const double* vp = ws.basis.data() + static_cast<std::size_t>(j - 1) * nn;
      const double bprev = ws.beta[static_cast<std::size_t>(j - 1)];
      for (std::size_t i = 0; i < nn; ++i) w[i] -= bprev * vp[i];
    }
    const double norm_before = std::sqrt(dot(w, w, n));
    for (int pass = 0; pass < 2; ++pass) {
      for (int l = 0; l <= j; ++l) {
        const double* vl = ws.basis.data() + static_cast<std::size_t>(l) * nn;
        double c = dot(vl, w, n);
        for (std::size_t i = 0; i < nn; ++i) w[i] -= c * vl[i];
      }
      if (pass == 0 && std::sqrt(dot(w, w, n)) > 0.7071 * norm_before) break;
    }
    double b = std::sqrt(dot(w, w, n));
    if (b <= 1e-13 * std::max(1.0, std::abs(a))) {
      res.breakdown = true;  // invariant subspace; current Ritz pair is exact
      break;
    }
    ws.beta[static_cast<std::size_t>(j)] = b;
    double* vn = ws.basis.data() + static_cast<std::size_t>(j + 1) * nn;
    for (std::size_t i = 0; i < nn; ++i) vn[i] = w[i] / b;
  }

  // Ritz decomposition of the q x q tridiagonal section.
  const std::size_t qq = static_cast<std::size_t>(q);
  ws.tri_d.assign(qq, 0.0);
  ws.tri_e.assign(qq, 0.0);
  ws.tri_z.assign(qq * qq, 0.0);
  for (std::size_t i = 0; i < qq; ++i) {
    ws.tri_d[i] = ws.alpha[i];
    if (i + 1 < qq) ws.tri_e[i] = ws.beta[i];
    ws.tri_z[i * qq + i] = 1.0;
  }
  tridiag_eigen(qq, ws.tri_d.data(), ws.tri_e.data(), ws.tri_z.data());
  std::size_t best = 0;
  for (std::size_t i = 1; i < qq; ++i)
    if (ws.tri_d[i] > ws.tri_d[best]) best = i;

  res.lambda = ws.tri_d[best];
  res.iterations = q;
  res.h.assign(nn, 0.0);
  for (std::size_t j = 0; j < qq; ++j) {
    const double s = ws.tri_z[j * qq + best];
    const double* vj = ws.basis.data() + j * nn;
    for (std::size_t i = 0; i < nn; ++i) res.h[i] += s * vj[i];
  }
  double hn = std::sqrt(dot(res.h.data(), res.h.data(), n));
  if (hn > 0.0)
    for (std::size_t i = 0; i < nn; ++i) res.h[i] /= hn;
  return res;
}

LanczosResult lanczos_max_eigvec(const SymOp& op, double rho, double p, Rng& rng, int max_iters) {
  LanczosWorkspace ws;
  return lanczos_max_eigvec(op, rho, p, rng, ws, max_iters);
}

}  // namespace gsfw
