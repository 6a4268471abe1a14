#pragma once

#include <cstddef>
#include <span>

#include "gsfw/cost.hpp"
#include "gsfw/memlog.hpp"

namespace gsfw {

enum class ProblemKind { MaxKCut, MaxAgree };

// Everything the penalized objective needs to know about an instance.
// MaxKCut:  beta = 6 Tr(C), M = 6 log(2n+|E|)/eps, gap_scale = Tr(C),
//           edge bound b = -1/(k-1).
// MaxAgree: beta = 4 Delta, M = 4 log(2n+|E|)/eps, gap_scale = Delta,
//           edge bound b = 0.
struct PenaltyConfig {
  ProblemKind kind = ProblemKind::MaxKCut;
  int k = 2;  // parts; meaningful for MaxKCut only
  double eps = 0.1;
  double eta = 0.5;  // LMO accuracy parameter in (0,1)
  double beta = 0.0;
  double M = 0.0;
  double alpha = 0.0;      // trace bound, = n
  double gap_scale = 0.0;  // Tr(C) or Delta; eps-optimality is eps*gap_scale
  std::size_t d1 = 0;      // n equality constraints
  std::size_t d2 = 0;      // |E| inequality constraints

  // b in the residual w_e = b - X_e.
  double edge_bound() const { return kind == ProblemKind::MaxKCut ? -1.0 / (k - 1) : 0.0; }
  // Curvature upper bound of the penalized objective: beta * M * n^2.
  double curvature_bound() const {
    return beta * M * static_cast<double>(d1) * static_cast<double>(d1);
  }
  // Spectral norm bound on the gradient: gap_scale + beta * sqrt(2|E| + n).
  double grad_norm_bound() const;
};

PenaltyConfig make_kcut_config(const CostOperator& cost, std::size_t num_edges, int k, double eps,
                               double eta = 0.5);
PenaltyConfig make_maxagree_config(const MaxAgreeCost& mac, std::size_t num_edges, double eps,
                                   double eta = 0.5);

// Iteration cap from the convergence bound: ceil(2 C_g^u (1+eta) / (eps * gap_scale)) - 2.
double iteration_cap(const PenaltyConfig& cfg);
// The closed-form cap with the paper's constants folded in:
// 144 log(2n+|E|) n^2 / eps^2 for k-cut, 64 ... for Max-Agree.
double lemma_iteration_bound(ProblemKind kind, std::size_t n, std::size_t num_edges, double eps);

// Tracked entries of the implicit matrix variable: diag(X) and X_e for e in E.
struct ConstraintImage {
  tracked_vector<double> diag;
  tracked_vector<double> edge;

  static ConstraintImage identity(std::size_t n, std::size_t num_edges);
  static ConstraintImage zeros(std::size_t n, std::size_t num_edges);
};

// phi_M(u, v) = (1/M) log(sum e^{M u_i} + sum e^{-M u_i} + sum e^{M v_j}),
// evaluated max-shifted. Throws on non-finite input.
double phi_m(std::span<const double> u, std::span<const double> v, double m);

// Softmax-weight partial derivatives; du_i in (-1,1), dv_j in (0,1),
// sum |du| + sum dv <= 1.
void phi_m_gradient(std::span<const double> u, std::span<const double> v, double m,
                    std::span<double> du, std::span<double> dv);

// u_i = diag_i - 1, w_e = b - X_e.
void residuals(const ConstraintImage& v, const PenaltyConfig& cfg, std::span<double> u,
               std::span<double> w);

// max{ ||u||_inf, max(0, max_e w_e) } -- the table notion of infeasibility.
double infeasibility(const ConstraintImage& v, const PenaltyConfig& cfg);

// <C, X> - beta * phi_M(residuals), a function of the image alone.
double objective_value(const ConstraintImage& v, const PenaltyConfig& cfg,
                       const CostOperator& cost);

// grad g = C - beta diag*(du) + sum_e beta dw_e A_e with A_e = (e_i e_j^T + e_j e_i^T)/2.
// Stored sparsely: pen_diag = beta*du (n), pen_edge = beta*dw (|E|).
// Also carries the gradient of g as a function of the image, used for the
// surrogate gap: vgrad_diag_i = C_ii - pen_diag_i, vgrad_edge_e = 2 c_e + pen_edge_e.
struct GradientOperator {
  const CostOperator* cost = nullptr;
  tracked_vector<double> pen_diag;
  tracked_vector<double> pen_edge;

  int dim() const { return cost->n; }
  // y = (grad g) x
  void matvec(const double* x, double* y) const;

  double vgrad_diag(std::size_t i) const { return cost->diag[i] - pen_diag[i]; }
  double vgrad_edge(std::size_t e) const { return 2.0 * cost->edge_c[e] + pen_edge[e]; }
};

GradientOperator gradient_operator(const ConstraintImage& v, const PenaltyConfig& cfg,
                                   const CostOperator& cost);

// <a - b, vgrad> in the image space; equals the matrix-space inner product
// of the lifted difference with grad g.
double image_gap(const ConstraintImage& a, const ConstraintImage& b, const GradientOperator& op);

}  // namespace gsfw
