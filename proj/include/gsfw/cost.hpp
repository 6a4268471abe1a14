#pragma once

#include "gsfw/graph.hpp"
#include "gsfw/memlog.hpp"

namespace gsfw {

// Sparse symmetric cost matrix supported on the diagonal and the edge set.
// Each off-diagonal entry is stored once (i < j) and applied in both
// directions by matvec. Edge order matches the constraint image.
struct CostOperator {
  int n = 0;
  tracked_vector<double> diag;
  tracked_vector<int> edge_i;
  tracked_vector<int> edge_j;
  tracked_vector<double> edge_c;
  double trace = 0.0;

  std::size_t num_edges() const { return edge_c.size(); }

  // y = C x
  void matvec(const double* x, double* y) const;

  // <C, X> computed from the constraint image entries of X:
  // sum_i C_ii * diag_i + 2 * sum_e c_e * X_e.
  double inner_from_image(const double* x_diag, const double* x_edge) const;
};

// C = (k-1)/(2k) * L_G. Annihilates constant vectors.
CostOperator build_cost_maxkcut(const WeightedGraph& g, int k);

// C = L_{G-} + W+ for Max-Agree, plus the scale Delta = Tr(L_{G-}) + sum w+.
// Off-diagonal entries: +w+ on E+, -w- on E-; diagonal from L_{G-} only.
struct MaxAgreeCost {
  CostOperator cost;
  double delta = 0.0;
};
MaxAgreeCost build_cost_maxagree(const SignedGraph& sg);

}  // namespace gsfw
