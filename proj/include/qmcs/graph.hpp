#pragma once

#include "qmcs/weight.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace qmcs {

using Vertex = std::uint32_t;

struct WeightedEdge {
  Vertex u = 0;
  Vertex v = 0;
  Weight w = 1;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Edges in arrival order. Order matters to the streaming estimator.
struct EdgeStream {
  std::size_t n = 0;
  std::vector<WeightedEdge> edges;

  friend bool operator==(const EdgeStream&, const EdgeStream&) = default;
};

struct Neighbor {
  Vertex to;
  std::size_t edge;  // index into WeightedGraph::edges()
};

/// Simple undirected graph with positive rational weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t n);

  static WeightedGraph from_stream(const EdgeStream& stream);

  /// Throws std::invalid_argument on self-loops, duplicates, out-of-range
  /// endpoints or nonpositive weights.
  void add_edge(Vertex u, Vertex v, Weight w = 1);

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  bool has_edge(Vertex u, Vertex v) const;
  /// True when every edge has weight exactly 1.
  bool is_unweighted() const noexcept { return unweighted_; }
  std::size_t non_isolated_count() const;

  EdgeStream to_stream() const;

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<WeightedEdge> edges_;
  std::unordered_set<std::uint64_t> keys_;
  bool unweighted_ = true;
};

std::uint64_t edge_key(Vertex u, Vertex v) noexcept;

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   # comment
//   n <count>
//   u v [w]        w is an integer or "p/q"; defaults to 1
// ---------------------------------------------------------------------------

struct ParseOptions {
  /// Weights must be multiples of 1/max_denominator.
  std::int64_t max_denominator = 1 << 20;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Forward-only reader over an edge list. Holds O(1) state: it validates each
/// line on its own and therefore cannot detect duplicate pairs.
class EdgeLineReader {
 public:
  explicit EdgeLineReader(std::istream& in, ParseOptions options = {});

  EdgeLineReader(const EdgeLineReader&) = delete;
  EdgeLineReader& operator=(const EdgeLineReader&) = delete;

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t line() const noexcept { return line_; }

  /// Next edge, or nullopt at end of input. Throws ParseError.
  std::optional<WeightedEdge> next();

 private:
  bool next_content_line(std::string& out);

  std::istream& in_;
  ParseOptions options_;
  std::size_t n_ = 0;
  std::size_t line_ = 0;
};

EdgeStream parse_edge_list(std::istream& in, ParseOptions options = {});
EdgeStream parse_edge_list(std::string_view text, ParseOptions options = {});
std::string serialize_edge_list(const EdgeStream& stream);

// ---------------------------------------------------------------------------
// Parameters and decompositions
// ---------------------------------------------------------------------------

/// m: sum of all edge weights.
Weight total_weight(const WeightedGraph& g);

/// W: sum over vertices of the heaviest incident edge weight.
Weight max_incident_sum(const WeightedGraph& g);

struct TreeEdge {
  Vertex parent;
  Vertex child;
  std::size_t level;  // depth of the child, so the root's edges are level 1
};

struct Star {
  Vertex center;
  std::vector<Vertex> leaves;
};

struct DfsLevel {
  std::size_t index = 0;
  std::vector<TreeEdge> edges;
  std::vector<Star> stars;
};

struct DfsDecomposition {
  std::vector<std::size_t> depth;  // per vertex; 0 for roots
  std::vector<Vertex> root;        // per vertex: root of its component
  std::vector<TreeEdge> tree;      // in discovery order
  std::vector<DfsLevel> levels;    // levels[i - 1].index == i
};

/// Depth-first forest. Each component is rooted at its lowest vertex id and
/// children are visited in ascending id order.
DfsDecomposition dfs_decomposition(const WeightedGraph& g);

struct HeaviestEdgeDecomposition {
  std::vector<WeightedEdge> matching;  // chosen by both endpoints
  std::vector<WeightedEdge> forest;    // chosen by exactly one endpoint
  Weight matching_weight = 0;
  Weight forest_weight = 0;
};

/// Every vertex picks its heaviest incident edge; ties go to the
/// lexicographically smallest (min endpoint, max endpoint) pair.
HeaviestEdgeDecomposition heaviest_edge_decomposition(const WeightedGraph& g);

/// Index of the edge vertex v picks in heaviest_edge_decomposition, if any.
std::optional<std::size_t> heaviest_incident_edge(const WeightedGraph& g, Vertex v);

struct BipartiteCheck {
  bool bipartite = true;
  std::vector<std::uint8_t> color;  // valid 2-coloring when bipartite
  std::vector<Vertex> odd_cycle;    // closed walk v0 .. vk (v0 adjacent to vk) otherwise
};

BipartiteCheck is_bipartite(const WeightedGraph& g);

}  // namespace qmcs
