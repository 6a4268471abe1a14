#pragma once

#include <cstdint>
#include <vector>

#include "gsfw/graph.hpp"
#include "gsfw/penalty.hpp"
#include "gsfw/rng.hpp"
#include "gsfw/solver.hpp"

namespace gsfw {

// Vertex labels in {0..k-1}.
struct Partition {
  std::vector<int> assign;
};

// Sign-pattern cluster labels in {0..2^s-1} for s samples.
struct Clustering {
  std::vector<int> assign;
};

// Feasibility repair: shift out the worst edge violation with a fresh
// rank-one 1-direction, then rescale so the covariance has unit diagonal.
//   err  = max{0, max_e (b - X_e)}          (b = -1/(k-1) or 0, from cfg)
//   zbar = z_i + sqrt(err) * y_i * 1,        y_i ~ N(0,1) fresh per sample
//   s    = max(1, max(diag) + err)
//   zf_i = zbar / sqrt(s) + zeta_i,          zeta_i ~ N(0, I - diag*((diag+err)/s))
// The resulting covariance has diag exactly 1, edge entries >= b, and is PSD.
// The max(1, .) floor on the denominator covers the corner where every
// diagonal entry sits below 1; without it the rescaling could push edge
// entries past the bound.
SampleSet repair_samples(const SampleSet& z, const ConstraintImage& v, const PenaltyConfig& cfg,
                         Rng& rng);

// err and the scale s, exposed for the closed-form covariance
//   X^f = (X + err 11^T)/s + (I - diag*((diag(X)+err)/s))
// used by shadow checks.
struct RepairParams {
  double err = 0.0;
  double scale = 1.0;
};
RepairParams repair_params(const ConstraintImage& v, const PenaltyConfig& cfg);

// Vertex i goes to the part whose sample has the largest coordinate there.
// Ties break to the lowest index.
Partition fj_round(const SampleSet& zf);

// Cluster label = sign pattern of the s sample coordinates (s in {2,3});
// Swamy's 0.75-rounding is the s = 2 case.
Clustering sign_pattern_round(const SampleSet& zf);

double cut_value(const WeightedGraph& g, const Partition& part);
double agree_value(const SignedGraph& sg, const Clustering& c);

// Exhaustive optima for desk-scale verification. k-cut fixes vertex 0's
// label; Max-Agree enumerates set partitions (n <= 10).
std::pair<double, Partition> brute_force_maxkcut(const WeightedGraph& g, int k);
std::pair<double, Clustering> brute_force_maxagree(const SignedGraph& sg);

// Monte-Carlo estimate of the rounding constant
//   alpha_k = min_{rho} k p(rho) / ((k-1)(1-rho)),
// p(rho) = probability two rho-correlated coordinates land in different
// parts under the argmax rule. The grid stops short of rho = 1 where the
// ratio provably increases. Results are cached per configuration.
struct AlphaOracle {
  int k = 2;
  std::vector<double> rho_grid;
  std::vector<double> p_est;
  double alpha_k = 0.0;
};
AlphaOracle alpha_k_oracle(int k, int grid_points, long mc_samples, Rng& rng);

// Cached front-end; same arguments return the same object.
double alpha_k_value(int k, int grid_points = 61, long mc_samples = 1000000,
                     std::uint64_t seed = 0xA1FA);

// Label-vector interchange: a JSON array like [0,2,1,1].
std::string labels_to_json(const std::vector<int>& assign);
std::vector<int> labels_from_json(const std::string& text);

}  // namespace gsfw
