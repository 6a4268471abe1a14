#include "gsfw/rounding.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "json.hpp"

namespace gsfw {

std::string labels_to_json(const std::vector<int>& assign) {
  return nlohmann::json(assign).dump();
}

std::vector<int> labels_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array of labels");
  return j.get<std::vector<int>>();
}

RepairParams repair_params(const ConstraintImage& v, const PenaltyConfig& cfg) {
  const double b = cfg.edge_bound();
  RepairParams rp;
  for (double x : v.edge) rp.err = std::max(rp.err, b - x);
  rp.err = std::max(rp.err, 0.0);
  double max_diag = 0.0;
  for (double d : v.diag) max_diag = std::max(max_diag, d);
  rp.scale = std::max(1.0, max_diag + rp.err);
  return rp;
}

SampleSet repair_samples(const SampleSet& z, const ConstraintImage& v, const PenaltyConfig& cfg,
                         Rng& rng) {
  const RepairParams rp = repair_params(v, cfg);
  const int n = z.n;
  const double sqrt_err = std::sqrt(rp.err);
  const double inv_sqrt_s = 1.0 / std::sqrt(rp.scale);

  SampleSet zf;
  zf.n = n;
  zf.k = z.k;
  zf.z.resize(z.z.size());
  for (int s = 0; s < z.k; ++s) {
    const double* src = z.vec(s);
    double* dst = zf.vec(s);
    const double y = rng.normal();
    for (int i = 0; i < n; ++i) {
      const double zbar = src[i] + sqrt_err * y;
      double var = 1.0 - (v.diag[static_cast<std::size_t>(i)] + rp.err) / rp.scale;
      assert(var >= -1e-12);
      var = std::max(var, 0.0);
      dst[i] = zbar * inv_sqrt_s + std::sqrt(var) * rng.normal();
    }
  }
  return zf;
}

Partition fj_round(const SampleSet& zf) {
  if (zf.k < 1) throw std::invalid_argument("need at least one sample");
  Partition part;
  part.assign.resize(static_cast<std::size_t>(zf.n));
  for (int i = 0; i < zf.n; ++i) {
    int best = 0;
    double best_val = zf.vec(0)[i];
    for (int s = 1; s < zf.k; ++s) {
      if (zf.vec(s)[i] > best_val) {
        best_val = zf.vec(s)[i];
        best = s;
      }
    }
    part.assign[static_cast<std::size_t>(i)] = best;
  }
  return part;
}

Clustering sign_pattern_round(const SampleSet& zf) {
  if (zf.k != 2 && zf.k != 3) throw std::invalid_argument("sign-pattern rounding takes 2 or 3 samples");
  Clustering c;
  c.assign.resize(static_cast<std::size_t>(zf.n));
  for (int i = 0; i < zf.n; ++i) {
    int label = 0;
    for (int s = 0; s < zf.k; ++s)
      if (zf.vec(s)[i] >= 0.0) label |= 1 << s;
    c.assign[static_cast<std::size_t>(i)] = label;
  }
  return c;
}

double cut_value(const WeightedGraph& g, const Partition& part) {
  double total = 0.0;
  for (const Edge& e : g.edges)
    if (part.assign[static_cast<std::size_t>(e.i)] != part.assign[static_cast<std::size_t>(e.j)])
      total += e.w;
  return total;
}

double agree_value(const SignedGraph& sg, const Clustering& c) {
  double total = 0.0;
  for (const Edge& e : sg.minus_edges)
    if (c.assign[static_cast<std::size_t>(e.i)] != c.assign[static_cast<std::size_t>(e.j)])
      total += e.w;
  for (const Edge& e : sg.plus_edges)
    if (c.assign[static_cast<std::size_t>(e.i)] == c.assign[static_cast<std::size_t>(e.j)])
      total += e.w;
  return total;
}

std::pair<double, Partition> brute_force_maxkcut(const WeightedGraph& g, int k) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  const int n = g.n;
  double combos = std::pow(static_cast<double>(k), n);
  if (combos > 1e7) throw std::invalid_argument("instance too large for brute force");

  Partition cur;
  cur.assign.assign(static_cast<std::size_t>(n), 0);
  Partition best = cur;
  double best_val = cut_value(g, cur);

  // Vertex 0 stays in part 0: label permutations preserve the cut.
  while (true) {
    int pos = n - 1;
    while (pos >= 1) {
      if (++cur.assign[static_cast<std::size_t>(pos)] < k) break;
      cur.assign[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 1) break;
    double val = cut_value(g, cur);
    if (val > best_val) {
      best_val = val;
      best = cur;
    }
  }
  return {best_val, best};
}

std::pair<double, Clustering> brute_force_maxagree(const SignedGraph& sg) {
  const int n = sg.n;
  if (n > 10) throw std::invalid_argument("instance too large for set-partition enumeration");
  Clustering cur;
  cur.assign.assign(static_cast<std::size_t>(n), 0);
  Clustering best = cur;
  double best_val = agree_value(sg, cur);

  // Restricted growth strings enumerate set partitions exactly once.
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  while (true) {
    int pos = n - 1;
    for (; pos >= 1; --pos) {
      int max_prefix = 0;
      for (int i = 0; i < pos; ++i) max_prefix = std::max(max_prefix, rgs[static_cast<std::size_t>(i)]);
      if (rgs[static_cast<std::size_t>(pos)] <= max_prefix) {
        ++rgs[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < n; ++i) rgs[static_cast<std::size_t>(i)] = 0;
        break;
      }
    }
    if (pos < 1) break;
    cur.assign = rgs;
    double val = agree_value(sg, cur);
    if (val > best_val) {
      best_val = val;
      best = cur;
    }
  }
  return {best_val, best};
}

AlphaOracle alpha_k_oracle(int k, int grid_points, long mc_samples, Rng& rng) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (grid_points < 2) throw std::invalid_argument("need at least two grid points");

  AlphaOracle out;
  out.k = k;
  const double lo = -1.0 / (k - 1);
  // The ratio k p / ((k-1)(1-rho)) grows without bound as rho -> 1 (p decays
  // like sqrt(1-rho) there), so the grid stops at 0.9.
  const double hi = 0.9;

  std::vector<double> a(static_cast<std::size_t>(k)), b(static_cast<std::size_t>(k));
  out.alpha_k = HUGE_VAL;
  for (int gi = 0; gi < grid_points; ++gi) {
    const double rho = lo + (hi - lo) * gi / (grid_points - 1);
    const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    long diff = 0;
    for (long s = 0; s < mc_samples; ++s) {
      int arg_a = 0, arg_b = 0;
      for (int l = 0; l < k; ++l) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        a[static_cast<std::size_t>(l)] = g1;
        b[static_cast<std::size_t>(l)] = rho * g1 + c * g2;
        if (a[static_cast<std::size_t>(l)] > a[static_cast<std::size_t>(arg_a)]) arg_a = l;
        if (b[static_cast<std::size_t>(l)] > b[static_cast<std::size_t>(arg_b)]) arg_b = l;
      }
      if (arg_a != arg_b) ++diff;
    }
    const double p_rho = static_cast<double>(diff) / static_cast<double>(mc_samples);
    out.rho_grid.push_back(rho);
    out.p_est.push_back(p_rho);
    const double ratio = k * p_rho / ((k - 1) * (1.0 - rho));
    out.alpha_k = std::min(out.alpha_k, ratio);
  }
  return out;
}

double alpha_k_value(int k, int grid_points, long mc_samples, std::uint64_t seed) {
  struct Key {
    int k;
    int grid;
    long samples;
    std::uint64_t seed;
    bool operator<(const Key& o) const {
      return std::tie(k, grid, samples, seed) < std::tie(o.k, o.grid, o.samples, o.seed);
    }
  };
  static std::map<Key, double> cache;
  static std::mutex mu;
  Key key{k, grid_points, mc_samples, seed};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Rng rng(seed);
  AlphaOracle o = alpha_k_oracle(k, grid_points, mc_samples, rng);
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = o.alpha_k;
  return o.alpha_k;
}

}  // namespace gsfw
