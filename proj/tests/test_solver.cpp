#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "gsfw/solver.hpp"
#include "support/oracles.hpp"

using namespace gsfw;

namespace {

Problem kcut_problem(const WeightedGraph& g, int k, double eps, double eta = 0.5) {
  Problem p;
  p.cost = build_cost_maxkcut(g, k);
  p.cfg = make_kcut_config(p.cost, g.edges.size(), k, eps, eta);
  return p;
}

ConstraintImage image_of(const std::vector<double>& x, const CostOperator& cost) {
  const std::size_t n = static_cast<std::size_t>(cost.n);
  ConstraintImage v;
  v.diag.resize(n);
  v.edge.resize(cost.num_edges());
  for (std::size_t i = 0; i < n; ++i) v.diag[i] = x[i * n + i];
  for (std::size_t e = 0; e < cost.num_edges(); ++e)
    v.edge[e] = x[static_cast<std::size_t>(cost.edge_i[e]) * n + cost.edge_j[e]];
  return v;
}

}  // namespace

TEST_CASE("lmo on a PSD operator returns a rank-one image") {
  WeightedGraph g = make_graph(2, {{0, 1, 1.0}});
  Problem p = kcut_problem(g, 2, 0.2);
  // beta = 0 makes grad g = C, which is PSD for k-cut.
  p.cfg.beta = 0.0;
  ConstraintImage v = ConstraintImage::identity(2, 1);
  GradientOperator op = gradient_operator(v, p.cfg, p.cost);
  Rng rng(11);
  LanczosWorkspace ws;
  LmoResult r = lmo(op, 1e-3, 0.01, p.cfg.alpha, p.cfg.grad_norm_bound(), rng, ws);
  CHECK(r.lambda >= 0.0);
  REQUIRE(r.h.size() == 2);
  CHECK(r.q.diag[0] == doctest::Approx(p.cfg.alpha * r.h[0] * r.h[0]));
  CHECK(r.q.diag[1] == doctest::Approx(p.cfg.alpha * r.h[1] * r.h[1]));
  CHECK(r.q.edge[0] == doctest::Approx(p.cfg.alpha * r.h[0] * r.h[1]));
}

TEST_CASE("lmo takes the zero vertex on negative-definite operators") {
  WeightedGraph g = make_graph(3, {{0, 1, 1.0}});
  Problem p = kcut_problem(g, 2, 0.2);
  CostOperator neg_id;
  neg_id.n = 3;
  neg_id.diag.assign(3, -1.0);
  GradientOperator op;
  op.cost = &neg_id;
  op.pen_diag.assign(3, 0.0);
  Rng rng(12);
  LanczosWorkspace ws;
  LmoResult r = lmo(op, 1e-3, 0.01, 3.0, 1.0, rng, ws);
  CHECK(r.lambda < 0.0);
  CHECK(r.h.empty());
  for (double d : r.q.diag) CHECK(d == 0.0);
}

TEST_CASE("update_variable: gamma = 0 is the identity, gamma = 1 the full step") {
  Rng rng(13);
  SampleSet z = SampleSet::standard_normal(4, 3, rng);
  SampleSet z0 = z;
  ConstraintImage v = ConstraintImage::identity(4, 0);
  ConstraintImage q = ConstraintImage::zeros(4, 0);
  tracked_vector<double> h{0.5, 0.5, 0.5, 0.5};

  update_variable(z, v, h, q, 0.0, 4.0, rng);
  for (std::size_t i = 0; i < z.z.size(); ++i) CHECK(z.z[i] == z0.z[i]);
  for (double d : v.diag) CHECK(d == 1.0);

  for (std::size_t i = 0; i < 4; ++i) q.diag[i] = 4.0 * h[i] * h[i];
  update_variable(z, v, h, q, 1.0, 4.0, rng);
  // each row is now sqrt(alpha) * zeta * h: proportional to h
  for (int s = 0; s < 3; ++s) {
    const double ratio = z.vec(s)[0] / h[0];
    for (int i = 1; i < 4; ++i) CHECK(z.vec(s)[i] == doctest::Approx(ratio * h[i]));
  }
  for (std::size_t i = 0; i < 4; ++i) CHECK(v.diag[i] == doctest::Approx(q.diag[i]));
}

TEST_CASE("zero direction shrinks the samples and the image") {
  Rng rng(14);
  SampleSet z = SampleSet::standard_normal(3, 1, rng);
  const double z00 = z.vec(0)[0];
  ConstraintImage v = ConstraintImage::identity(3, 0);
  ConstraintImage q = ConstraintImage::zeros(3, 0);
  update_variable(z, v, {}, q, 0.5, 3.0, rng);
  CHECK(z.vec(0)[0] == doctest::Approx(std::sqrt(0.5) * z00));
  CHECK(v.diag[0] == doctest::Approx(0.5));
}

TEST_CASE("v tracks the dense shadow recursion on a small instance") {
  Rng rng(15);
  WeightedGraph g = oracle::er_graph(12, 0.4, rng);
  Problem p = kcut_problem(g, 2, 0.15);
  FwOptions opt;
  opt.k_samples = 2;
  opt.max_iters = 400;
  opt.shadow = true;
  opt.seed = 99;
  SolverResult res = fw_gaussian(p, opt);
  CHECK(res.stats.shadow_vdev_max <= 1e-8);
  REQUIRE(res.shadow_x.size() == 144);
  // final image equals the dense entries exactly up to fp drift
  ConstraintImage vx = image_of(res.shadow_x, p.cost);
  for (std::size_t i = 0; i < vx.diag.size(); ++i)
    CHECK(res.v.diag[i] == doctest::Approx(vx.diag[i]).epsilon(1e-9));
}

TEST_CASE("sample covariance follows a fixed update schedule") {
  // Three deterministic (h, gamma) steps; the shadow recursion gives X_3 and
  // a large batch of samples run through the same updates must match it.
  const int n = 4;
  std::vector<tracked_vector<double>> hs = {
      {0.5, 0.5, 0.5, 0.5}, {std::sqrt(0.5), -std::sqrt(0.5), 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}};
  std::vector<double> gammas = {0.6, 0.4, 0.25};
  const double alpha = 4.0;

  oracle::DenseSym shadow(n);
  for (int i = 0; i < n; ++i) shadow.at(i, i) = 1.0;
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        shadow.at(i, j) =
            (1.0 - gammas[s]) * shadow.at(i, j) + gammas[s] * alpha * hs[s][i] * hs[s][j];

  Rng rng(1234);
  const int reps = 60000;
  SampleSet z = SampleSet::standard_normal(n, reps, rng);
  ConstraintImage v = ConstraintImage::identity(n, 0);
  ConstraintImage q = ConstraintImage::zeros(n, 0);
  for (int s = 0; s < 3; ++s) update_variable(z, v, hs[s], q, gammas[s], alpha, rng);

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int r = 0; r < reps; ++r) acc += z.vec(r)[i] * z.vec(r)[j];
      CHECK(std::abs(acc / reps - shadow.at(i, j)) <= 0.05);
    }
}

TEST_CASE("returned samples have the shadow covariance in a real run") {
  Rng rng(24);
  WeightedGraph g = oracle::er_graph(6, 0.7, rng);
  Problem p = kcut_problem(g, 2, 0.1);
  FwOptions opt;
  opt.k_samples = 40000;
  opt.max_iters = 40;
  opt.shadow = true;
  opt.seed = 71;
  SolverResult res = fw_gaussian(p, opt);
  const std::size_t n = 6;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (int s = 0; s < res.samples.k; ++s) acc += res.samples.vec(s)[i] * res.samples.vec(s)[j];
      acc /= res.samples.k;
      CHECK(std::abs(acc - res.shadow_x[i * n + j]) <= 0.05);
    }
}

TEST_CASE("solver converges with feasibility within eps on a small graph") {
  Rng rng(16);
  WeightedGraph g = oracle::er_graph(20, 0.3, rng);
  Problem p = kcut_problem(g, 2, 0.15);
  FwOptions opt;
  opt.k_samples = 2;
  opt.max_iters = 400000;
  opt.seed = 5;
  SolverResult res = fw_gaussian(p, opt);
  CHECK(res.stats.converged);
  CHECK(res.stats.infeas <= 0.15);
  CHECK(res.stats.final_gap <= p.cfg.eps * p.cfg.gap_scale);
  CHECK(res.stats.iterations <=
        static_cast<long>(lemma_iteration_bound(ProblemKind::MaxKCut, 20, g.edges.size(), 0.15)));
  // infeasibility is recomputable from the returned image
  CHECK(res.stats.infeas == doctest::Approx(infeasibility(res.v, p.cfg)));
  // both iteration bounds are recorded; the closed form embeds eta = 1, so
  // the configured-eta cap sits below it
  CHECK(res.stats.iter_bound_lemma ==
        doctest::Approx(lemma_iteration_bound(ProblemKind::MaxKCut, 20, g.edges.size(), 0.15)));
  CHECK(res.stats.iter_cap_configured > 0.0);
  CHECK(res.stats.iter_cap_configured <= res.stats.iter_bound_lemma);
}

TEST_CASE("objective on the penalized triangle lands in the oracle band") {
  // Dense oracle for the k=2 relaxation on the unit triangle: maximize
  // 1.5 - 0.5 (x+y+z) over PSD matrices with unit diagonal; optimum 2.25 at
  // x = y = z = -1/2. A coarse grid + refinement reproduces it.
  auto psd3 = [](double x, double y, double z) {
    // principal minors of [[1,x,y],[x,1,z],[y,z,1]]
    return 1.0 - x * x >= -1e-12 &&
           1.0 + 2.0 * x * y * z - x * x - y * y - z * z >= -1e-12;
  };
  double best = -1e30;
  for (double x = -1.0; x <= 1.0; x += 0.005)
    for (double y = -1.0; y <= 1.0; y += 0.005)
      for (double z = -1.0; z <= 1.0; z += 0.005)
        if (psd3(x, y, z)) best = std::max(best, 1.5 - 0.5 * (x + y + z));
  CHECK(best == doctest::Approx(2.25).epsilon(0.01));

  WeightedGraph tri = make_graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
  Problem p = kcut_problem(tri, 2, 0.2);
  FwOptions opt;
  opt.k_samples = 2;
  opt.max_iters = 200000;
  opt.seed = 21;
  SolverResult res = fw_gaussian(p, opt);
  CHECK(res.stats.converged);
  const double eps = 0.2;
  CHECK(res.stats.cost_value >= (1.0 - 2.0 * eps) * 2.25);
  CHECK(res.stats.cost_value <= (1.0 + 4.0 * eps) * 2.25);
}

TEST_CASE("zero-weight-only graphs converge immediately at the identity") {
  WeightedGraph g = make_graph(3, {{0, 1, 0.0}, {1, 2, 0.0}});
  Problem p = kcut_problem(g, 2, 0.2);
  CHECK(p.cfg.gap_scale == 0.0);
  FwOptions opt;
  opt.k_samples = 2;
  opt.seed = 3;
  SolverResult res = fw_gaussian(p, opt);
  CHECK(res.stats.converged);
  CHECK(res.stats.iterations == 0);
  CHECK(res.stats.infeas == 0.0);
}

TEST_CASE("no n x n object is allocated outside shadow mode") {
  Rng rng(22);
  const int n = 400;
  WeightedGraph g = oracle::er_graph(n, 4.0 / n, rng);
  Problem p = kcut_problem(g, 2, 0.15);
  FwOptions opt;
  opt.k_samples = 2;
  opt.max_iters = 400;
  opt.seed = 61;
  memlog::reset_peak();
  (void)fw_gaussian(p, opt);
  // Tracked high water (working set + Krylov basis) stays far below the n^2
  // words a dense iterate would cost.
  CHECK(memlog::peak_words() <
        static_cast<std::size_t>(n) * static_cast<std::size_t>(n) / 4);
  CHECK(p.cfg.d1 + p.cfg.d2 > 0);
}

TEST_CASE("non-convergence inside the budget returns a flagged partial result") {
  Rng rng(17);
  WeightedGraph g = oracle::er_graph(30, 0.3, rng);
  Problem p = kcut_problem(g, 2, 0.05);
  FwOptions opt;
  opt.k_samples = 2;
  opt.max_iters = 10;
  opt.seed = 4;
  SolverResult res = fw_gaussian(p, opt);
  CHECK_FALSE(res.stats.converged);
  CHECK(res.stats.iterations == 10);
  CHECK(std::isfinite(res.stats.infeas));
}

TEST_CASE("same seed gives bit-identical runs; the shadow flag does not disturb them") {
  Rng rng(18);
  WeightedGraph g = oracle::er_graph(10, 0.5, rng);
  Problem p = kcut_problem(g, 2, 0.2);
  FwOptions opt;
  opt.k_samples = 3;
  opt.max_iters = 5000;
  opt.seed = 77;
  SolverResult a = fw_gaussian(p, opt);
  SolverResult b = fw_gaussian(p, opt);
  CHECK(a.stats.iterations == b.stats.iterations);
  CHECK(a.stats.final_gap == b.stats.final_gap);
  for (std::size_t i = 0; i < a.v.diag.size(); ++i) CHECK(a.v.diag[i] == b.v.diag[i]);
  for (std::size_t i = 0; i < a.samples.z.size(); ++i) CHECK(a.samples.z[i] == b.samples.z[i]);

  opt.shadow = true;
  SolverResult c = fw_gaussian(p, opt);
  CHECK(c.stats.iterations == a.stats.iterations);
  for (std::size_t i = 0; i < a.v.diag.size(); ++i) CHECK(a.v.diag[i] == c.v.diag[i]);
}

TEST_CASE("sampling solver agrees with an independent dense Frank-Wolfe route") {
  Rng rng(23);
  for (int trial = 0; trial < 3; ++trial) {
    WeightedGraph g = oracle::er_graph(7, 0.6, rng, 0.5, 1.5);
    if (g.edges.empty()) continue;
    const double eps = 0.15;
    Problem p = kcut_problem(g, 2, eps);

    FwOptions opt;
    opt.k_samples = 2;
    opt.max_iters = 500000;
    opt.seed = 230 + trial;
    SolverResult sparse = fw_gaussian(p, opt);
    REQUIRE(sparse.stats.converged);

    auto dense = oracle::dense_penalized_fw(p.cost, p.cfg, eps * p.cfg.gap_scale, 500000);
    REQUIRE(dense.converged);

    // Both stop at surrogate gap <= eps * gap_scale, so each objective is
    // within that much of the optimum and of the other.
    const double tol = eps * p.cfg.gap_scale + 1e-9;
    CHECK(std::abs(sparse.stats.objective - dense.objective) <= tol);
    // The linear values sit in the same Lemma window around <C, X*>.
    const double lo = (1.0 - 2.0 * eps) / (1.0 + 4.0 * eps);
    const double hi = (1.0 + 4.0 * eps) / (1.0 - 2.0 * eps);
    const double ratio = sparse.stats.cost_value / dense.cost_value;
    CHECK(ratio >= lo - 1e-9);
    CHECK(ratio <= hi + 1e-9);
  }
}

TEST_CASE("gap soundness in shadow mode: the surrogate gap dominates suboptimality") {
  Rng rng(19);
  WeightedGraph g = oracle::er_graph(8, 0.5, rng);
  Problem p = kcut_problem(g, 2, 0.2);
  FwOptions opt;
  opt.k_samples = 2;
  opt.max_iters = 50000;
  opt.seed = 31;
  SolverResult res = fw_gaussian(p, opt);
  REQUIRE(res.stats.converged);

  // Long-run oracle estimate of the optimum: any value g attains is a lower
  // bound on g*.
  Problem fine = p;
  fine.cfg.eps = 0.02;
  FwOptions fopt;
  fopt.k_samples = 2;
  fopt.max_iters = 2000000;
  fopt.seed = 32;
  SolverResult ref = fw_gaussian(fine, fopt);
  CHECK(ref.stats.objective - res.stats.objective <= res.stats.final_gap + 1e-9);
}

TEST_CASE("objective trace never drops more than the per-step slack (shadow run)") {
  Rng rng(20);
  WeightedGraph g = oracle::er_graph(10, 0.5, rng);
  Problem p = kcut_problem(g, 2, 0.25);
  FwOptions opt;
  opt.k_samples = 2;
  opt.max_iters = 300;
  opt.trace_every = 1;
  opt.seed = 41;
  SolverResult res = fw_gaussian(p, opt);
  const double cg = p.cfg.curvature_bound();
  for (std::size_t i = 1; i < res.stats.objective_trace.size(); ++i) {
    const auto& [t_prev, g_prev] = res.stats.objective_trace[i - 1];
    const auto& [t_cur, g_cur] = res.stats.objective_trace[i];
    REQUIRE(t_cur == t_prev + 1);
    const double gamma = 2.0 / (static_cast<double>(t_cur - 1) + 2.0);
    const double slack = 0.5 * gamma * gamma * cg * (1.0 + p.cfg.eta);
    CHECK(g_cur >= g_prev - slack - 1e-9);
  }
}

TEST_CASE("checkpoint round-trip: split run equals straight run bit for bit") {
  Rng rng(21);
  WeightedGraph g = oracle::er_graph(9, 0.5, rng);
  Problem p = kcut_problem(g, 2, 0.1);

  FwOptions straight;
  straight.k_samples = 2;
  straight.max_iters = 200;
  straight.seed = 55;
  SolverResult full = fw_gaussian(p, straight);

  FwOptions first_half = straight;
  first_half.max_iters = 90;
  SolverResult half = fw_gaussian(p, first_half);
  REQUIRE_FALSE(half.stats.converged);

  const std::string path = "/tmp/gsfw_ck_test.json";
  // The solver consumed RNG state through its own run; rebuild it the same
  // way a periodic checkpoint would have.
  FwOptions with_ck = first_half;
  with_ck.checkpoint_path = path;
  with_ck.checkpoint_every = 90;
  (void)fw_gaussian(p, with_ck);
  Checkpoint ck = load_checkpoint(path);
  CHECK(ck.t == 90);

  FwOptions second_half = straight;
  second_half.max_iters = 110;
  SolverResult resumed = fw_gaussian_resume(p, second_half, ck);
  CHECK(resumed.stats.iterations == full.stats.iterations);
  for (std::size_t i = 0; i < full.v.diag.size(); ++i)
    CHECK(resumed.v.diag[i] == full.v.diag[i]);
  for (std::size_t i = 0; i < full.samples.z.size(); ++i)
    CHECK(resumed.samples.z[i] == full.samples.z[i]);
  std::remove(path.c_str());
}
