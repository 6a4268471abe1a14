#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gsfw/lanczos.hpp"
#include "gsfw/penalty.hpp"
#include "gsfw/rng.hpp"

namespace gsfw {

// k vectors jointly distributed N(0, X_t). All vectors share each step's
// (h_t, gamma_t) but draw independent scalars, so they stay i.i.d.
// conditioned on the h-path. Row-major k x n.
struct SampleSet {
  int n = 0;
  int k = 0;
  tracked_vector<double> z;

  double* vec(int s) { return z.data() + static_cast<std::size_t>(s) * n; }
  const double* vec(int s) const { return z.data() + static_cast<std::size_t>(s) * n; }

  static SampleSet standard_normal(int n, int k, Rng& rng);
};

struct LmoResult {
  double lambda = 0.0;
  tracked_vector<double> h;  // unit vector, or empty when the step is zero
  ConstraintImage q;         // B(alpha h h^T), or zeros
  int lanczos_iters = 0;
};

// LMO over {X >= 0, Tr X <= alpha}: approximate max eigenpair of op; the
// vertex is alpha h h^T when lambda >= 0 and the zero matrix otherwise.
// delta is the additive error budget; it maps to the Lanczos accuracy via
// delta = alpha * (rho/8) * ||grad||, with grad_norm_bound standing in for
// the norm.
LmoResult lmo(const GradientOperator& op, double delta, double p, double alpha,
              double grad_norm_bound, Rng& rng, LanczosWorkspace& ws, int lanczos_cap = 0);

// One Frank-Wolfe step at the sample level:
//   z <- sqrt(1-gamma) z + sqrt(gamma alpha) zeta h,  zeta ~ N(0,1) per vector
//   v <- (1-gamma) v + gamma q
// h may be empty (zero step): the samples only shrink.
void update_variable(SampleSet& z, ConstraintImage& v, const tracked_vector<double>& h,
                     const ConstraintImage& q, double gamma, double alpha, Rng& rng);

struct SolverStats {
  std::uint64_t seed = 0;
  long iterations = 0;
  bool converged = false;
  double final_gap = 0.0;
  double infeas = 0.0;
  double objective = 0.0;        // g at the final image
  double cost_value = 0.0;       // <C, X_hat> from the final image
  double iter_cap_configured = 0.0;  // ceil(2 C_g^u (1+eta)/(eps gap)) - 2 at the configured eta
  double iter_bound_lemma = 0.0;     // the closed form with the paper constants folded in
  long lanczos_iters_total = 0;
  std::vector<std::pair<long, double>> objective_trace;  // downsampled (t, g)
  double shadow_vdev_max = 0.0;  // max_t ||v_t - B(X_t)||_inf, shadow only
};

struct FwOptions {
  int k_samples = 2;
  long max_iters = 1000000;
  double p_override = 0.0;     // 0: p = eps / T_lemma
  int lanczos_cap = 0;         // 0: min(theory, n)
  bool shadow = false;         // maintain a dense X_t for verification
  long trace_every = 0;        // 0: ~1000 trace points
  std::uint64_t seed = 1;
  std::string checkpoint_path;  // empty: no checkpointing
  long checkpoint_every = 0;
};

struct Problem {
  CostOperator cost;
  PenaltyConfig cfg;
};

struct SolverResult {
  SampleSet samples;
  ConstraintImage v;
  SolverStats stats;
  std::vector<double> shadow_x;  // n*n row-major; empty unless shadow mode
};

// Algorithm: start at X0 = I (v0 = B(I), z0 i.i.d. standard normal), loop
//   (h, q) <- LMO(grad g(v), eta-scaled budget)
//   stop when <q - v, grad g(v)> <= eps * gap_scale
//   (z, v) <- update(z, v, h, q, gamma = 2/(t+2))
// Non-convergence inside max_iters returns the partial state flagged.
SolverResult fw_gaussian(const Problem& prob, const FwOptions& opt);

// Resumable state round-trip (JSON): {t, v, z, rng_state}.
struct Checkpoint {
  long t = 0;
  ConstraintImage v;
  SampleSet z;
  Rng::State rng;
};
void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);
SolverResult fw_gaussian_resume(const Problem& prob, const FwOptions& opt, const Checkpoint& ck);

}  // namespace gsfw
