#include "gsfw/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace gsfw {

void RunConfig::validate() const {
  if (kind == ProblemKind::MaxKCut) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (!(eps > 0.0 && eps < 0.2)) throw std::invalid_argument("eps must be in (0, 1/5) for k-cut");
  } else {
    if (ma_samples != 2 && ma_samples != 3)
      throw std::invalid_argument("Max-Agree rounding uses 2 or 3 samples");
    if (!(eps > 0.0 && eps < 1.0 / 7.0))
      throw std::invalid_argument("eps must be in (0, 1/7) for Max-Agree");
  }
  if (reps < 1) throw std::invalid_argument("need at least one rounding replication");
  if (tau && !(*tau > 0.0 && *tau < 1.0)) throw std::invalid_argument("tau must be in (0,1)");
}

namespace {

WeightedGraph maybe_sparsify(const WeightedGraph& g, const RunConfig& cfg, std::uint64_t seed) {
  if (!cfg.tau) return g;
  SparsifierState st(g.n, *cfg.tau, seed, cfg.sparsify_scale, cfg.sparsify_budget_override);
  for (const Edge& e : g.edges) st.ingest(e);
  return st.finalize();
}

// Shared tail: solve, repair, round groups, fill the report.
template <typename RoundFn>
PipelineResult finish(Problem prob, const RunConfig& cfg, int group_size, RoundFn&& round_group) {
  const auto t_start = std::chrono::steady_clock::now();
  memlog::reset_peak();

  FwOptions opt;
  opt.k_samples = group_size * cfg.reps;
  opt.max_iters = cfg.max_iters;
  opt.p_override = cfg.p_override;
  opt.lanczos_cap = cfg.lanczos_cap;
  opt.shadow = cfg.shadow;
  opt.trace_every = cfg.trace_every;
  opt.seed = cfg.seed;
  opt.checkpoint_path = cfg.checkpoint_path;
  opt.checkpoint_every = cfg.checkpoint_every;

  PipelineResult out;
  if (cfg.resume_from.empty()) {
    out.solver = fw_gaussian(prob, opt);
  } else {
    Checkpoint ck = load_checkpoint(cfg.resume_from);
    if (ck.z.k != opt.k_samples)
      throw std::invalid_argument("checkpoint carries a different sample count");
    out.solver = fw_gaussian_resume(prob, opt, ck);
  }

  Rng round_rng = Rng(cfg.seed).child(0x0FEED);
  SampleSet repaired = repair_samples(out.solver.samples, out.solver.v, prob.cfg, round_rng);

  double best = -HUGE_VAL, sum = 0.0;
  SampleSet group;
  group.n = repaired.n;
  group.k = group_size;
  group.z.resize(static_cast<std::size_t>(group.n) * group_size);
  for (int r = 0; r < cfg.reps; ++r) {
    for (int s = 0; s < group_size; ++s) {
      const double* src = repaired.vec(r * group_size + s);
      std::copy(src, src + group.n, group.vec(s));
    }
    const double val = round_group(group);
    sum += val;
    best = std::max(best, val);
  }

  RunReport& rep = out.report;
  rep.dataset = cfg.dataset;
  rep.kind = cfg.kind;
  rep.n = prob.cost.n;
  rep.k = cfg.kind == ProblemKind::MaxKCut ? cfg.k : cfg.ma_samples;
  rep.iterations = out.solver.stats.iterations;
  rep.converged = out.solver.stats.converged;
  rep.infeas = out.solver.stats.infeas;
  rep.sdp_value = out.solver.stats.cost_value;
  rep.best_value = best;
  rep.mean_value = sum / cfg.reps;
  rep.ar = rep.sdp_value != 0.0 ? rep.best_value / rep.sdp_value : 0.0;
  rep.memory_words = memlog::peak_words();
  rep.seed = cfg.seed;
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          t_start)
                    .count();
  return out;
}

}  // namespace

PipelineResult run_maxkcut(const WeightedGraph& g, const RunConfig& cfg) {
  if (cfg.kind != ProblemKind::MaxKCut) throw std::invalid_argument("config is not a k-cut config");
  cfg.validate();

  WeightedGraph solved = maybe_sparsify(g, cfg, Rng(cfg.seed).child(0x5A125).next_u64());
  Problem prob;
  prob.cost = build_cost_maxkcut(solved, cfg.k);
  prob.cfg = make_kcut_config(prob.cost, solved.edges.size(), cfg.k, cfg.eps, cfg.eta);

  PipelineResult out = finish(std::move(prob), cfg, cfg.k, [&g](const SampleSet& group) {
    return cut_value(g, fj_round(group));
  });
  out.report.e_plus = g.edges.size();
  out.report.e_minus = 0;
  return out;
}

PipelineResult run_maxagree(const SignedGraph& sg, const RunConfig& cfg) {
  if (cfg.kind != ProblemKind::MaxAgree) throw std::invalid_argument("config is not a Max-Agree config");
  cfg.validate();

  SignedGraph solved = sg;
  if (cfg.tau) {
    // Sparsify the similar and dissimilar graphs separately; both sides keep
    // positive weights.
    auto child = Rng(cfg.seed).child(0x5A125);
    SparsifierState plus(sg.n, *cfg.tau, child.next_u64(), cfg.sparsify_scale,
                         cfg.sparsify_budget_override);
    SparsifierState minus(sg.n, *cfg.tau, child.next_u64(), cfg.sparsify_scale,
                          cfg.sparsify_budget_override);
    for (const Edge& e : sg.plus_edges) plus.ingest(e);
    for (const Edge& e : sg.minus_edges) minus.ingest(e);
    solved.plus_edges = plus.finalize().edges;
    solved.minus_edges = minus.finalize().edges;
  }

  Problem prob;
  MaxAgreeCost mac = build_cost_maxagree(solved);
  prob.cfg = make_maxagree_config(mac, mac.cost.num_edges(), cfg.eps, cfg.eta);
  prob.cost = std::move(mac.cost);

  PipelineResult out = finish(std::move(prob), cfg, cfg.ma_samples, [&sg](const SampleSet& group) {
    return agree_value(sg, sign_pattern_round(group));
  });
  // Report the relaxation value in clustering units (each edge counted
  // once): sum w+ X_ij + sum w- (1 - X_ij), which is half the matrix inner
  // product <L_{G-} + W+, X> at unit diagonal. Rounded values and the
  // guarantee thresholds live in those units.
  out.report.sdp_value *= 0.5;
  out.report.ar = out.report.sdp_value != 0.0 ? out.report.best_value / out.report.sdp_value : 0.0;
  out.report.e_plus = sg.plus_edges.size();
  out.report.e_minus = sg.minus_edges.size();
  return out;
}

PipelineResult run_maxagree_jaccard(const WeightedGraph& g, double delta, const RunConfig& cfg) {
  return run_maxagree(jaccard_signed_graph(g, delta), cfg);
}

}  // namespace gsfw
