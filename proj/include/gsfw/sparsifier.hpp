#pragma once

#include <cstdint>
#include <map>

#include "gsfw/graph.hpp"
#include "gsfw/memlog.hpp"
#include "gsfw/rng.hpp"

namespace gsfw {

// One-pass reweighted edge sampler with a hard size budget of
//   ceil(budget_scale * n * log(n) / tau^2)
// edges (explicit override possible). Each edge gets priority w/u with
// u ~ U(0,1); the budget-many largest priorities stay, and a kept edge is
// reweighted to max(w, threshold) where threshold is the (budget+1)-largest
// priority seen. That estimator keeps the sampled Laplacian unbiased.
// Duplicate pairs accumulate their weight while resident.
class SparsifierState {
 public:
  SparsifierState(int n, double tau, std::uint64_t seed, double budget_scale = 4.0,
                  std::size_t budget_override = 0);

  void ingest(const Edge& e);
  WeightedGraph finalize() const;

  std::size_t budget() const { return budget_; }
  std::size_t reservoir_size() const { return reservoir_.size(); }
  long edges_seen() const { return edges_seen_; }

 private:
  struct Entry {
    double weight;
    double unif;  // the U(0,1) draw; priority = weight / unif
    double priority() const { return weight / unif; }
  };

  void evict_if_over_budget();

  int n_;
  double tau_;
  std::size_t budget_;
  long edges_seen_ = 0;
  double threshold_ = 0.0;  // largest evicted priority
  Rng rng_;
  std::map<std::pair<int, int>, Entry> reservoir_;
};

// Max over probe vectors of |x^T L_sparse x / x^T L_full x - 1|; Gaussian
// probes plus the coordinate-difference directions of the densest vertex
// pairs. Probes inside the common null space are skipped. Dense and
// test-time by nature; exempt from the allocation budget.
double audit_closeness(const WeightedGraph& g, const WeightedGraph& sparse, int trials, Rng& rng);

}  // namespace gsfw
