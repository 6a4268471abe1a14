#include "gsfw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace gsfw {

SampleSet SampleSet::standard_normal(int n, int k, Rng& rng) {
  SampleSet s;
  s.n = n;
  s.k = k;
  s.z.resize(static_cast<std::size_t>(n) * k);
  for (double& x : s.z) x = rng.normal();
  return s;
}

LmoResult lmo(const GradientOperator& op, double delta, double p, double alpha,
              double grad_norm_bound, Rng& rng, LanczosWorkspace& ws, int lanczos_cap) {
  const int n = op.dim();
  const std::size_t m = op.pen_edge.size();
  LmoResult out;

  if (grad_norm_bound <= 0.0) {
    // Zero operator: any trace-bounded PSD point scores zero; take the zero
    // vertex.
    out.q = ConstraintImage::zeros(static_cast<std::size_t>(n), m);
    return out;
  }

  double rho = 8.0 * delta / (alpha * grad_norm_bound);
  rho = std::clamp(rho, 1e-12, 1.0);

  SymOp sym{n, [&op](const double* x, double* y) { op.matvec(x, y); }};
  LanczosResult lr = lanczos_max_eigvec(sym, rho, p, rng, ws, lanczos_cap);
  out.lanczos_iters = lr.iterations;
  out.lambda = lr.lambda;

  if (lr.lambda >= 0.0) {
    out.h = std::move(lr.h);
    out.q.diag.resize(static_cast<std::size_t>(n));
    out.q.edge.resize(m);
    for (int i = 0; i < n; ++i) out.q.diag[static_cast<std::size_t>(i)] = alpha * out.h[i] * out.h[i];
    for (std::size_t e = 0; e < m; ++e)
      out.q.edge[e] = alpha * out.h[op.cost->edge_i[e]] * out.h[op.cost->edge_j[e]];
  } else {
    out.h.clear();
    out.q = ConstraintImage::zeros(static_cast<std::size_t>(n), m);
  }
  return out;
}

void update_variable(SampleSet& z, ConstraintImage& v, const tracked_vector<double>& h,
                     const ConstraintImage& q, double gamma, double alpha, Rng& rng) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0,1]");
  const double shrink = std::sqrt(1.0 - gamma);
  const double step = std::sqrt(gamma * alpha);
  const int n = z.n;
  for (int s = 0; s < z.k; ++s) {
    double* row = z.vec(s);
    const double zeta = rng.normal();  // independent per sample, shared h
    if (!h.empty()) {
      const double c = step * zeta;
      for (int i = 0; i < n; ++i) row[i] = shrink * row[i] + c * h[i];
    } else {
      for (int i = 0; i < n; ++i) row[i] = shrink * row[i];
    }
  }
  for (std::size_t i = 0; i < v.diag.size(); ++i) v.diag[i] = (1.0 - gamma) * v.diag[i] + gamma * q.diag[i];
  for (std::size_t e = 0; e < v.edge.size(); ++e) v.edge[e] = (1.0 - gamma) * v.edge[e] + gamma * q.edge[e];
}

namespace {

struct ShadowState {
  int n = 0;
  std::vector<double> x;  // dense X_t, plain storage: verification only

  void init_identity(int dim) {
    n = dim;
    x.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i) * dim + i] = 1.0;
  }
  void step(const tracked_vector<double>& h, double gamma, double alpha) {
    const std::size_t nn = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < nn; ++i)
      for (std::size_t j = 0; j < nn; ++j) {
        double rank1 = h.empty() ? 0.0 : alpha * h[i] * h[j];
        x[i * nn + j] = (1.0 - gamma) * x[i * nn + j] + gamma * rank1;
      }
  }
  double image_deviation(const ConstraintImage& v, const CostOperator& cost) const {
    const std::size_t nn = static_cast<std::size_t>(n);
    double dev = 0.0;
    for (std::size_t i = 0; i < nn; ++i) dev = std::max(dev, std::abs(v.diag[i] - x[i * nn + i]));
    for (std::size_t e = 0; e < v.edge.size(); ++e) {
      const std::size_t a = static_cast<std::size_t>(cost.edge_i[e]);
      const std::size_t b = static_cast<std::size_t>(cost.edge_j[e]);
      dev = std::max(dev, std::abs(v.edge[e] - x[a * nn + b]));
    }
    return dev;
  }
};

SolverResult run_loop(const Problem& prob, const FwOptions& opt, SampleSet z, ConstraintImage v,
                      Rng rng, long t0) {
  const PenaltyConfig& cfg = prob.cfg;
  const CostOperator& cost = prob.cost;
  const std::size_t n = cfg.d1;
  const std::size_t m = cfg.d2;

  SolverResult res;
  res.stats.seed = opt.seed;

  const double cap = iteration_cap(cfg);
  res.stats.iter_cap_configured = cap;
  res.stats.iter_bound_lemma = lemma_iteration_bound(cfg.kind, n, m, cfg.eps);
  double p = opt.p_override;
  if (p <= 0.0) {
    const double t_lemma = lemma_iteration_bound(cfg.kind, n, m, cfg.eps);
    p = cfg.eps / t_lemma;
  }
  p = std::clamp(p, 1e-300, 0.5);

  const double cg_u = cfg.curvature_bound();
  const double norm_bound = cfg.grad_norm_bound();
  const double stop_level = cfg.eps * cfg.gap_scale;

  long trace_every = opt.trace_every;
  if (trace_every <= 0) trace_every = std::max<long>(1, opt.max_iters / 1000);

  ShadowState shadow;
  if (opt.shadow) shadow.init_identity(static_cast<int>(n));

  LanczosWorkspace ws;
  long t = t0;
  bool converged = false;
  double gap = 0.0;

  // Degenerate instance (zero cost, zero penalty): v0 already optimal.
  if (cfg.gap_scale <= 0.0) converged = true;

  while (!converged && t - t0 < opt.max_iters) {
    const double gamma = 2.0 / (static_cast<double>(t) + 2.0);
    GradientOperator op = gradient_operator(v, cfg, cost);
    const double delta = 0.5 * cfg.eta * gamma * cg_u;
    LmoResult step = lmo(op, delta, p, cfg.alpha, norm_bound, rng, ws, opt.lanczos_cap);
    res.stats.lanczos_iters_total += step.lanczos_iters;

    gap = image_gap(step.q, v, op);
    if (gap <= stop_level) {
      converged = true;
      break;
    }

    update_variable(z, v, step.h, step.q, gamma, cfg.alpha, rng);
    if (opt.shadow) {
      shadow.step(step.h, gamma, cfg.alpha);
      res.stats.shadow_vdev_max =
          std::max(res.stats.shadow_vdev_max, shadow.image_deviation(v, cost));
    }
    ++t;

    if ((t - t0) % trace_every == 0)
      res.stats.objective_trace.emplace_back(t, objective_value(v, cfg, cost));
    if (opt.checkpoint_every > 0 && !opt.checkpoint_path.empty() &&
        (t - t0) % opt.checkpoint_every == 0)
      save_checkpoint(opt.checkpoint_path, Checkpoint{t, v, z, rng.save()});
    if (cap > 0.0 && static_cast<double>(t) >= cap) break;  // theory cap reached
  }

  res.stats.iterations = t;
  res.stats.converged = converged;
  res.stats.final_gap = gap;
  res.stats.infeas = infeasibility(v, cfg);
  res.stats.objective = objective_value(v, cfg, cost);
  res.stats.cost_value = cost.inner_from_image(v.diag.data(), v.edge.data());
  res.samples = std::move(z);
  res.v = std::move(v);
  if (opt.shadow) res.shadow_x = std::move(shadow.x);
  return res;
}

}  // namespace

SolverResult fw_gaussian(const Problem& prob, const FwOptions& opt) {
  const std::size_t n = prob.cfg.d1;
  const std::size_t m = prob.cfg.d2;
  if (static_cast<int>(n) != prob.cost.n || m != prob.cost.num_edges())
    throw std::invalid_argument("config does not match cost operator");
  if (opt.k_samples < 1) throw std::invalid_argument("need at least one sample vector");

  Rng rng(opt.seed);
  SampleSet z = SampleSet::standard_normal(static_cast<int>(n), opt.k_samples, rng);
  ConstraintImage v = ConstraintImage::identity(n, m);
  return run_loop(prob, opt, std::move(z), std::move(v), rng, 0);
}

SolverResult fw_gaussian_resume(const Problem& prob, const FwOptions& opt, const Checkpoint& ck) {
  if (ck.v.diag.size() != prob.cfg.d1 || ck.v.edge.size() != prob.cfg.d2 ||
      ck.z.n != prob.cost.n)
    throw std::invalid_argument("checkpoint does not match the problem instance");
  return run_loop(prob, opt, ck.z, ck.v, Rng::restore(ck.rng), ck.t);
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  nlohmann::json j;
  j["t"] = ck.t;
  j["v"]["diag"] = std::vector<double>(ck.v.diag.begin(), ck.v.diag.end());
  j["v"]["edge"] = std::vector<double>(ck.v.edge.begin(), ck.v.edge.end());
  j["z"]["n"] = ck.z.n;
  j["z"]["k"] = ck.z.k;
  j["z"]["data"] = std::vector<double>(ck.z.z.begin(), ck.z.z.end());
  j["rng"]["state"] = ck.rng.state;
  j["rng"]["cache"] = ck.rng.cache;
  j["rng"]["has_cache"] = ck.rng.has_cache;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out << j.dump();
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  nlohmann::json j;
  in >> j;
  Checkpoint ck;
  ck.t = j.at("t").get<long>();
  auto dv = j.at("v").at("diag").get<std::vector<double>>();
  auto ev = j.at("v").at("edge").get<std::vector<double>>();
  ck.v.diag.assign(dv.begin(), dv.end());
  ck.v.edge.assign(ev.begin(), ev.end());
  ck.z.n = j.at("z").at("n").get<int>();
  ck.z.k = j.at("z").at("k").get<int>();
  auto zz = j.at("z").at("data").get<std::vector<double>>();
  ck.z.z.assign(zz.begin(), zz.end());
  ck.rng.state = j.at("rng").at("state").get<std::uint64_t>();
  ck.rng.cache = j.at("rng").at("cache").get<double>();
  ck.rng.has_cache = j.at("rng").at("has_cache").get<bool>();
  return ck;
}

}  // namespace gsfw
