#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gsfw/graph.hpp"
#include "gsfw/report.hpp"
#include "gsfw/rounding.hpp"
#include "gsfw/solver.hpp"
#include "gsfw/sparsifier.hpp"

namespace gsfw {

// End-to-end run description. eps ranges follow the guarantee windows:
// (0, 1/5) for k-cut, (0, 1/7) for Max-Agree.
struct RunConfig {
  ProblemKind kind = ProblemKind::MaxKCut;
  std::string dataset = "instance";
  int k = 2;                 // parts for k-cut
  int ma_samples = 2;        // 2 (Swamy, <=4 clusters) or 3 (<=8 clusters)
  double eps = 0.1;
  double eta = 0.5;
  double p_override = 0.0;   // 0: theory default eps/T
  long max_iters = 1000000;
  int reps = 10;             // rounding replications R
  std::uint64_t seed = 1;
  std::optional<double> tau;  // set: sparsify the input first
  double sparsify_scale = 4.0;
  std::size_t sparsify_budget_override = 0;
  bool shadow = false;
  int lanczos_cap = 0;
  long trace_every = 0;
  std::string checkpoint_path;  // write resumable state here every
  long checkpoint_every = 0;    // checkpoint_every iterations
  std::string resume_from;      // continue a previous run's checkpoint

  void validate() const;
};

struct PipelineResult {
  RunReport report;
  SolverResult solver;
};

// k-cut pipeline: (optional sparsify) -> cost -> solve with k*reps sample
// vectors -> repair -> FJ-round each group of k -> best/mean CUT, always
// evaluated on the original graph.
PipelineResult run_maxkcut(const WeightedGraph& g, const RunConfig& cfg);

// Max-Agree pipeline on a signed instance; rounding uses ma_samples sign
// patterns per replication.
PipelineResult run_maxagree(const SignedGraph& sg, const RunConfig& cfg);

// Convenience: make the signed instance from a plain graph via the Jaccard
// rule, then run.
PipelineResult run_maxagree_jaccard(const WeightedGraph& g, double delta, const RunConfig& cfg);

}  // namespace gsfw
