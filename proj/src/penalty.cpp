#include "gsfw/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsfw {

double PenaltyConfig::grad_norm_bound() const {
  return gap_scale + beta * std::sqrt(2.0 * static_cast<double>(d2) + static_cast<double>(d1));
}

PenaltyConfig make_kcut_config(const CostOperator& cost, std::size_t num_edges, int k, double eps,
                               double eta) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must be in (0,1)");
  // beta = 6 Tr(C) must be a penalty, so the total edge weight cannot be
  // negative (mixed-sign weights are fine as long as they sum >= 0).
  if (cost.trace < 0.0) throw std::invalid_argument("total edge weight must be nonnegative");
  PenaltyConfig cfg;
  cfg.kind = ProblemKind::MaxKCut;
  cfg.k = k;
  cfg.eps = eps;
  cfg.eta = eta;
  cfg.d1 = static_cast<std::size_t>(cost.n);
  cfg.d2 = num_edges;
  cfg.alpha = static_cast<double>(cost.n);
  cfg.beta = 6.0 * cost.trace;
  cfg.M = 6.0 * std::log(2.0 * cfg.d1 + cfg.d2) / eps;
  cfg.gap_scale = cost.trace;
  return cfg;
}

PenaltyConfig make_maxagree_config(const MaxAgreeCost& mac, std::size_t num_edges, double eps,
                                   double eta) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must be in (0,1)");
  PenaltyConfig cfg;
  cfg.kind = ProblemKind::MaxAgree;
  cfg.eps = eps;
  cfg.eta = eta;
  cfg.d1 = static_cast<std::size_t>(mac.cost.n);
  cfg.d2 = num_edges;
  cfg.alpha = static_cast<double>(mac.cost.n);
  cfg.beta = 4.0 * mac.delta;
  cfg.M = 4.0 * std::log(2.0 * cfg.d1 + cfg.d2) / eps;
  cfg.gap_scale = mac.delta;
  return cfg;
}

double iteration_cap(const PenaltyConfig& cfg) {
  if (cfg.gap_scale <= 0.0) return 0.0;
  return std::ceil(2.0 * cfg.curvature_bound() * (1.0 + cfg.eta) / (cfg.eps * cfg.gap_scale)) - 2.0;
}

double lemma_iteration_bound(ProblemKind kind, std::size_t n, std::size_t num_edges, double eps) {
  const double c = kind == ProblemKind::MaxKCut ? 144.0 : 64.0;
  const double nn = static_cast<double>(n);
  return c * std::log(2.0 * nn + static_cast<double>(num_edges)) * nn * nn / (eps * eps);
}

ConstraintImage ConstraintImage::identity(std::size_t n, std::size_t num_edges) {
  ConstraintImage v;
  v.diag.assign(n, 1.0);
  v.edge.assign(num_edges, 0.0);
  return v;
}

ConstraintImage ConstraintImage::zeros(std::size_t n, std::size_t num_edges) {
  ConstraintImage v;
  v.diag.assign(n, 0.0);
  v.edge.assign(num_edges, 0.0);
  return v;
}

namespace {

// Shift by the raw max r = max(||u||_inf, max_j v_j) rather than by M r, and
// scale differences instead of exponents: the dominant term becomes exp(0)
// exactly, so phi >= r holds in floating point, not just in exact arithmetic.
double raw_shift(std::span<const double> u, std::span<const double> v) {
  double r = -HUGE_VAL;
  for (double x : u) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite penalty input");
    r = std::max(r, std::abs(x));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite penalty input");
    r = std::max(r, x);
  }
  return r;
}

}  // namespace

double phi_m(std::span<const double> u, std::span<const double> v, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("M must be positive");
  if (u.empty() && v.empty()) throw std::invalid_argument("empty penalty input");
  const double r = raw_shift(u, v);
  double s = 0.0;
  for (double x : u) s += std::exp(m * (x - r)) + std::exp(m * (-x - r));
  for (double x : v) s += std::exp(m * (x - r));
  return r + std::log(s) / m;
}

void phi_m_gradient(std::span<const double> u, std::span<const double> v, double m,
                    std::span<double> du, std::span<double> dv) {
  if (!(m > 0.0)) throw std::invalid_argument("M must be positive");
  const double r = raw_shift(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double p = std::exp(m * (u[i] - r));
    const double q = std::exp(m * (-u[i] - r));
    du[i] = p - q;
    s += p + q;
  }
  for (std::size_t j = 0; j < v.size(); ++j) {
    dv[j] = std::exp(m * (v[j] - r));
    s += dv[j];
  }
  const double inv = 1.0 / s;
  for (std::size_t i = 0; i < u.size(); ++i) du[i] *= inv;
  for (std::size_t j = 0; j < v.size(); ++j) dv[j] *= inv;
}

void residuals(const ConstraintImage& v, const PenaltyConfig& cfg, std::span<double> u,
               std::span<double> w) {
  const double b = cfg.edge_bound();
  for (std::size_t i = 0; i < v.diag.size(); ++i) u[i] = v.diag[i] - 1.0;
  for (std::size_t e = 0; e < v.edge.size(); ++e) w[e] = b - v.edge[e];
}

double infeasibility(const ConstraintImage& v, const PenaltyConfig& cfg) {
  const double b = cfg.edge_bound();
  double worst = 0.0;
  for (double d : v.diag) worst = std::max(worst, std::abs(d - 1.0));
  for (double x : v.edge) worst = std::max(worst, b - x);
  return worst;
}

double objective_value(const ConstraintImage& v, const PenaltyConfig& cfg,
                       const CostOperator& cost) {
  double lin = cost.inner_from_image(v.diag.data(), v.edge.data());
  if (cfg.beta == 0.0) return lin;
  tracked_vector<double> u(v.diag.size()), w(v.edge.size());
  residuals(v, cfg, {u.data(), u.size()}, {w.data(), w.size()});
  return lin - cfg.beta * phi_m({u.data(), u.size()}, {w.data(), w.size()}, cfg.M);
}

void GradientOperator::matvec(const double* x, double* y) const {
  cost->matvec(x, y);
  const int n = cost->n;
  for (int i = 0; i < n; ++i) y[i] -= pen_diag[i] * x[i];
  const std::size_t m = pen_edge.size();
  for (std::size_t e = 0; e < m; ++e) {
    const int a = cost->edge_i[e], b = cost->edge_j[e];
    const double half = 0.5 * pen_edge[e];
    y[a] += half * x[b];
    y[b] += half * x[a];
  }
}

GradientOperator gradient_operator(const ConstraintImage& v, const PenaltyConfig& cfg,
                                   const CostOperator& cost) {
  GradientOperator op;
  op.cost = &cost;
  op.pen_diag.assign(v.diag.size(), 0.0);
  op.pen_edge.assign(v.edge.size(), 0.0);
  if (cfg.beta == 0.0) return op;

  tracked_vector<double> u(v.diag.size()), w(v.edge.size());
  residuals(v, cfg, u, w);
  tracked_vector<double> du(u.size()), dw(w.size());
  phi_m_gradient({u.data(), u.size()}, {w.data(), w.size()}, cfg.M, {du.data(), du.size()},
                 {dw.data(), dw.size()});
  for (std::size_t i = 0; i < du.size(); ++i) op.pen_diag[i] = cfg.beta * du[i];
  for (std::size_t e = 0; e < dw.size(); ++e) op.pen_edge[e] = cfg.beta * dw[e];
  return op;
}

double image_gap(const ConstraintImage& a, const ConstraintImage& b, const GradientOperator& op) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.diag.size(); ++i)
    acc += (a.diag[i] - b.diag[i]) * op.vgrad_diag(i);
  for (std::size_t e = 0; e < a.edge.size(); ++e)
    acc += (a.edge[e] - b.edge[e]) * op.vgrad_edge(e);
  return acc;
}

}  // namespace gsfw
