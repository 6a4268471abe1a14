#include "gsfw/cost.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gsfw {

void CostOperator::matvec(const double* x, double* y) const {
  for (int v = 0; v < n; ++v) y[v] = diag[v] * x[v];
  const std::size_t m = edge_c.size();
  for (std::size_t e = 0; e < m; ++e) {
    const int a = edge_i[e], b = edge_j[e];
    const double c = edge_c[e];
    y[a] += c * x[b];
    y[b] += c * x[a];
  }
}

double CostOperator::inner_from_image(const double* x_diag, const double* x_edge) const {
  double acc = 0.0;
  for (int v = 0; v < n; ++v) acc += diag[v] * x_diag[v];
  const std::size_t m = edge_c.size();
  for (std::size_t e = 0; e < m; ++e) acc += 2.0 * edge_c[e] * x_edge[e];
  return acc;
}

CostOperator build_cost_maxkcut(const WeightedGraph& g, int k) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  const double scale = static_cast<double>(k - 1) / (2.0 * k);

  CostOperator c;
  c.n = g.n;
  c.diag.assign(static_cast<std::size_t>(g.n), 0.0);
  c.edge_i.reserve(g.edges.size());
  c.edge_j.reserve(g.edges.size());
  c.edge_c.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    c.diag[static_cast<std::size_t>(e.i)] += scale * e.w;
    c.diag[static_cast<std::size_t>(e.j)] += scale * e.w;
    c.edge_i.push_back(e.i);
    c.edge_j.push_back(e.j);
    c.edge_c.push_back(-scale * e.w);
  }
  c.trace = 0.0;
  for (double d : c.diag) c.trace += d;
  return c;
}

MaxAgreeCost build_cost_maxagree(const SignedGraph& sg) {
  MaxAgreeCost out;
  CostOperator& c = out.cost;
  c.n = sg.n;
  c.diag.assign(static_cast<std::size_t>(sg.n), 0.0);

  double plus_sum = 0.0;
  for (const Edge& e : sg.minus_edges) {
    c.diag[static_cast<std::size_t>(e.i)] += e.w;
    c.diag[static_cast<std::size_t>(e.j)] += e.w;
  }
  auto combined = sg.combined_edges();
  // Membership of each combined edge: +w on E+, -w on E-. The signed graph
  // stores positive weights on both sides, so recover the side by lookup.
  std::set<std::pair<int, int>> plus_pairs;
  for (const Edge& e : sg.plus_edges) plus_pairs.insert({e.i, e.j});
  auto on_plus = [&plus_pairs](const Edge& e) {
    return plus_pairs.count({e.i, e.j}) > 0;
  };
  c.edge_i.reserve(combined.size());
  c.edge_j.reserve(combined.size());
  c.edge_c.reserve(combined.size());
  for (const Edge& e : combined) {
    c.edge_i.push_back(e.i);
    c.edge_j.push_back(e.j);
    if (on_plus(e)) {
      c.edge_c.push_back(e.w);
      plus_sum += e.w;
    } else {
      c.edge_c.push_back(-e.w);
    }
  }
  c.trace = 0.0;
  for (double d : c.diag) c.trace += d;
  out.delta = c.trace + plus_sum;
  return out;
}

}  // namespace gsfw
