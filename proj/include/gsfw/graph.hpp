#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsfw {

struct Edge {
  int i;
  int j;
  double w;
};

inline bool operator==(const Edge& a, const Edge& b) {
  return a.i == b.i && a.j == b.j && a.w == b.w;
}

// Undirected weighted graph in canonical form: every edge stored once with
// i < j, sorted lexicographically, no self loops, no duplicate pairs.
// Zero-weight edges are legal and kept; they still define constraints.
struct WeightedGraph {
  int n = 0;
  std::vector<Edge> edges;

  double total_weight() const;
};

// Similar / dissimilar pairs. plus_edges and minus_edges are disjoint and
// their union obeys WeightedGraph invariants; minus weights are strictly
// positive, plus weights nonnegative (a zero-weight similar edge still
// contributes its X_ij >= 0 constraint).
struct SignedGraph {
  int n = 0;
  std::vector<Edge> plus_edges;
  std::vector<Edge> minus_edges;

  // Combined edge list E = E+ u E-, canonical order. The constraint image
  // and cost operator index edges in exactly this order.
  std::vector<Edge> combined_edges() const;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Canonicalize an arbitrary (i, j, w) list: flip to i < j, sort, and check
// invariants. Throws ParseError on self loops, duplicates, out-of-range
// indices or non-finite weights.
WeightedGraph make_graph(int n, std::vector<Edge> edges);

// GSet text format: header "n m", then m lines "i j w" with 1-indexed
// endpoints. Errors name the offending line.
WeightedGraph parse_gset(std::istream& in);
WeightedGraph parse_gset_string(const std::string& text);
WeightedGraph load_gset_file(const std::string& path);
std::string serialize_gset(const WeightedGraph& g);

// Signed-graph interchange: one JSON object {"i":..,"j":..,"sign":+-1,"w":..}
// per line. Vertex count is inferred as max index + 1 unless n_hint is given.
std::string serialize_signed_jsonl(const SignedGraph& sg);
SignedGraph parse_signed_jsonl(std::istream& in, int n_hint = 0);
SignedGraph load_signed_jsonl_file(const std::string& path, int n_hint = 0);

// Jaccard-based conversion of a plain graph into a signed instance:
// J = |N(i) n N(j)| / |N(i) u N(j)| over unweighted adjacency sets,
// S = log((1 - J + delta) / (1 + J - delta)); S < 0 yields a dissimilar
// edge of weight -S, otherwise a similar edge of weight S. Note the rule
// sends high-Jaccard pairs to the dissimilar side; that is what the label
// formula says, and it is applied verbatim.
SignedGraph jaccard_signed_graph(const WeightedGraph& g, double delta);

}  // namespace gsfw
