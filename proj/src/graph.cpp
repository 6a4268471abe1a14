#include "gsfw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gsfw {

double WeightedGraph::total_weight() const {
  double acc = 0.0;
  for (const Edge& e : edges) acc += e.w;
  return acc;
}

std::vector<Edge> SignedGraph::combined_edges() const {
  std::vector<Edge> all;
  all.reserve(plus_edges.size() + minus_edges.size());
  all.insert(all.end(), plus_edges.begin(), plus_edges.end());
  all.insert(all.end(), minus_edges.begin(), minus_edges.end());
  std::sort(all.begin(), all.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
  return all;
}

WeightedGraph make_graph(int n, std::vector<Edge> edges) {
  if (n < 0) throw ParseError("vertex count must be nonnegative");
  for (Edge& e : edges) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j) throw ParseError("self loop on vertex " + std::to_string(e.i));
    if (e.i < 0 || e.j >= n)
      throw ParseError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                       ") out of range for n=" + std::to_string(n));
    if (!std::isfinite(e.w)) throw ParseError("non-finite edge weight");
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j)
      throw ParseError("duplicate edge (" + std::to_string(edges[k].i) + "," +
                       std::to_string(edges[k].j) + ")");
  }
  return WeightedGraph{n, std::move(edges)};
}

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

WeightedGraph parse_gset(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("empty input");
  long n = 0, m = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra) || n <= 0 || m < 0)
      fail_line(lineno, "expected header \"n m\" with positive n");
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<int, int>> seen;
  for (long k = 0; k < m; ++k) {
    if (!next_line()) throw ParseError("expected " + std::to_string(m) + " edge lines, got " +
                                       std::to_string(k));
    std::istringstream es(line);
    long i = 0, j = 0;
    double w = 0.0;
    std::string extra;
    if (!(es >> i >> j >> w) || (es >> extra)) fail_line(lineno, "malformed edge line");
    if (i < 1 || i > n || j < 1 || j > n) fail_line(lineno, "vertex index out of range");
    if (i == j) fail_line(lineno, "self loop");
    if (!std::isfinite(w)) fail_line(lineno, "non-finite weight");
    int a = static_cast<int>(i) - 1, b = static_cast<int>(j) - 1;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) fail_line(lineno, "duplicate edge");
    edges.push_back(Edge{a, b, w});
  }
  if (next_line()) fail_line(lineno, "trailing content after edge list");

  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
  return WeightedGraph{static_cast<int>(n), std::move(edges)};
}

WeightedGraph parse_gset_string(const std::string& text) {
  std::istringstream in(text);
  return parse_gset(in);
}

WeightedGraph load_gset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_gset(in);
}

std::string serialize_gset(const WeightedGraph& g) {
  std::ostringstream out;
  out.precision(17);
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const Edge& e : g.edges) out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.w << '\n';
  return out.str();
}

std::string serialize_signed_jsonl(const SignedGraph& sg) {
  std::ostringstream out;
  auto emit = [&out](const Edge& e, int sign) {
    nlohmann::json rec{{"i", e.i}, {"j", e.j}, {"sign", sign}, {"w", e.w}};
    out << rec.dump() << '\n';
  };
  for (const Edge& e : sg.plus_edges) emit(e, 1);
  for (const Edge& e : sg.minus_edges) emit(e, -1);
  return out.str();
}

SignedGraph parse_signed_jsonl(std::istream& in, int n_hint) {
  SignedGraph sg;
  sg.n = n_hint;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      fail_line(lineno, std::string("bad JSON: ") + ex.what());
    }
    if (!rec.contains("i") || !rec.contains("j") || !rec.contains("sign") || !rec.contains("w"))
      fail_line(lineno, "record needs fields i, j, sign, w");
    Edge e{rec["i"].get<int>(), rec["j"].get<int>(), rec["w"].get<double>()};
    int sign = rec["sign"].get<int>();
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j || e.i < 0) fail_line(lineno, "bad endpoints");
    if (!std::isfinite(e.w)) fail_line(lineno, "non-finite weight");
    if (sign == 1) {
      // w = 0 is legal on the similar side (it still contributes the
      // X_ij >= 0 constraint); the Jaccard rule produces it when J = delta.
      if (e.w < 0.0) fail_line(lineno, "similar-edge weight must be nonnegative");
      sg.plus_edges.push_back(e);
    } else if (sign == -1) {
      if (!(e.w > 0.0)) fail_line(lineno, "dissimilar-edge weight must be positive");
      sg.minus_edges.push_back(e);
    } else {
      fail_line(lineno, "sign must be +1 or -1");
    }
    sg.n = std::max(sg.n, e.j + 1);
  }
  auto by_pair = [](const Edge& a, const Edge& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  };
  std::sort(sg.plus_edges.begin(), sg.plus_edges.end(), by_pair);
  std::sort(sg.minus_edges.begin(), sg.minus_edges.end(), by_pair);
  // Disjointness check via the combined canonical list.
  auto all = sg.combined_edges();
  for (std::size_t k = 1; k < all.size(); ++k)
    if (all[k].i == all[k - 1].i && all[k].j == all[k - 1].j)
      throw ParseError("pair (" + std::to_string(all[k].i) + "," + std::to_string(all[k].j) +
                       ") appears in both edge sets");
  return sg;
}

SignedGraph load_signed_jsonl_file(const std::string& path, int n_hint) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_signed_jsonl(in, n_hint);
}

SignedGraph jaccard_signed_graph(const WeightedGraph& g, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");

  // Neighbor sets under set semantics: weights ignored.
  std::vector<std::vector<int>> nbrs(g.n);
  for (const Edge& e : g.edges) {
    nbrs[e.i].push_back(e.j);
    nbrs[e.j].push_back(e.i);
  }
  for (auto& v : nbrs) std::sort(v.begin(), v.end());

  SignedGraph sg;
  sg.n = g.n;
  for (const Edge& e : g.edges) {
    const auto& a = nbrs[e.i];
    const auto& b = nbrs[e.j];
    std::size_t inter = 0, ka = 0, kb = 0;
    while (ka < a.size() && kb < b.size()) {
      if (a[ka] == b[kb]) {
        ++inter;
        ++ka;
        ++kb;
      } else if (a[ka] < b[kb]) {
        ++ka;
      } else {
        ++kb;
      }
    }
    std::size_t uni = a.size() + b.size() - inter;
    double jac = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    double s = std::log((1.0 - jac + delta) / (1.0 + jac - delta));
    if (s < 0.0)
      sg.minus_edges.push_back(Edge{e.i, e.j, -s});
    else
      sg.plus_edges.push_back(Edge{e.i, e.j, s});
  }
  return sg;
}

}  // namespace gsfw
