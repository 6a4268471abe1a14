#include "gsfw/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace gsfw {

SparsifierState::SparsifierState(int n, double tau, std::uint64_t seed, double budget_scale,
                                 std::size_t budget_override)
    : n_(n), tau_(tau), rng_(seed) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must be in (0,1)");
  if (budget_override > 0) {
    budget_ = budget_override;
  } else {
    double b = std::ceil(budget_scale * n * std::log(std::max(2.0, static_cast<double>(n))) /
                         (tau * tau));
    budget_ = static_cast<std::size_t>(b);
  }
  if (budget_ < 1) budget_ = 1;
}

void SparsifierState::ingest(const Edge& edge) {
  Edge e = edge;
  if (e.i > e.j) std::swap(e.i, e.j);
  if (e.i == e.j) throw std::invalid_argument("self loop in edge stream");
  if (e.i < 0 || e.j >= n_) throw std::invalid_argument("edge endpoint out of range");
  if (!(e.w >= 0.0) || !std::isfinite(e.w))
    throw std::invalid_argument("sparsifier requires finite nonnegative weights");

  ++edges_seen_;
  auto key = std::pair(e.i, e.j);
  auto it = reservoir_.find(key);
  if (it != reservoir_.end()) {
    it->second.weight += e.w;  // resident duplicate accumulates
    return;
  }
  reservoir_.emplace(key, Entry{e.w, std::max(rng_.uniform(), 1e-300)});
  evict_if_over_budget();
}

void SparsifierState::evict_if_over_budget() {
  while (reservoir_.size() > budget_) {
    auto victim = reservoir_.begin();
    for (auto it = std::next(reservoir_.begin()); it != reservoir_.end(); ++it)
      if (it->second.priority() < victim->second.priority()) victim = it;
    threshold_ = std::max(threshold_, victim->second.priority());
    reservoir_.erase(victim);
  }
}

WeightedGraph SparsifierState::finalize() const {
  std::vector<Edge> edges;
  edges.reserve(reservoir_.size());
  for (const auto& [key, entry] : reservoir_)
    edges.push_back(Edge{key.first, key.second, std::max(entry.weight, threshold_)});
  return make_graph(n_, std::move(edges));
}

namespace {

// Dense Laplacian quadratic form; the audit is a test-time tool.
double laplacian_quadform(const WeightedGraph& g, const std::vector<double>& x) {
  double acc = 0.0;
  for (const Edge& e : g.edges) {
    const double d = x[static_cast<std::size_t>(e.i)] - x[static_cast<std::size_t>(e.j)];
    acc += e.w * d * d;
  }
  return acc;
}

}  // namespace

double audit_closeness(const WeightedGraph& g, const WeightedGraph& sparse, int trials, Rng& rng) {
  if (g.n != sparse.n) throw std::invalid_argument("audit needs matching vertex counts");
  const std::size_t n = static_cast<std::size_t>(g.n);
  const double weight_scale = std::max(1e-300, g.total_weight());

  double worst = 0.0;
  std::vector<double> x(n);
  auto probe = [&]() {
    double denom = laplacian_quadform(g, x);
    double norm2 = 0.0;
    for (double xi : x) norm2 += xi * xi;
    if (denom <= 1e-12 * weight_scale * norm2) return;  // common null space
    double num = laplacian_quadform(sparse, x);
    worst = std::max(worst, std::abs(num / denom - 1.0));
  };

  for (int t = 0; t < trials; ++t) {
    for (double& xi : x) xi = rng.normal();
    probe();
  }
  // Edge-difference directions localize single-edge distortion; capped so
  // the audit stays cheap on dense inputs.
  const std::size_t stride = std::max<std::size_t>(1, g.edges.size() / 500);
  for (std::size_t k = 0; k < g.edges.size(); k += stride) {
    const Edge& e = g.edges[k];
    std::fill(x.begin(), x.end(), 0.0);
    x[static_cast<std::size_t>(e.i)] = 1.0;
    x[static_cast<std::size_t>(e.j)] = -1.0;
    probe();
  }
  return worst;
}

}  // namespace gsfw
