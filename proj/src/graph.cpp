#include "qmcs/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

namespace qmcs {

std::uint64_t edge_key(Vertex u, Vertex v) noexcept {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

WeightedGraph::WeightedGraph(std::size_t n) : adjacency_(n) {}

WeightedGraph WeightedGraph::from_stream(const EdgeStream& stream) {
  WeightedGraph g(stream.n);
  for (const auto& e : stream.edges) g.add_edge(e.u, e.v, e.w);
  return g;
}

void WeightedGraph::add_edge(Vertex u, Vertex v, Weight w) {
  if (u >= vertex_count() || v >= vertex_count()) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
  if (w <= 0) throw std::invalid_argument("edge weight must be positive");
  if (!keys_.insert(edge_key(u, v)).second) {
    throw std::invalid_argument("duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
  }
  const std::size_t index = edges_.size();
  if (w != 1) unweighted_ = false;
  edges_.push_back({u, v, std::move(w)});
  adjacency_[u].push_back({v, index});
  adjacency_[v].push_back({u, index});
}

bool WeightedGraph::has_edge(Vertex u, Vertex v) const {
  return keys_.count(edge_key(u, v)) != 0;
}

std::size_t WeightedGraph::non_isolated_count() const {
  return static_cast<std::size_t>(std::count_if(adjacency_.begin(), adjacency_.end(),
                                                [](const auto& a) { return !a.empty(); }));
}

EdgeStream WeightedGraph::to_stream() const { return EdgeStream{vertex_count(), edges_}; }

Weight total_weight(const WeightedGraph& g) {
  Weight m = 0;
  for (const auto& e : g.edges()) m += e.w;
  return m;
}

Weight max_incident_sum(const WeightedGraph& g) {
  Weight total = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const Weight* best = nullptr;
    for (const auto& nb : g.neighbors(v)) {
      const Weight& w = g.edges()[nb.edge].w;
      if (best == nullptr || w > *best) best = &w;
    }
    if (best != nullptr) total += *best;
  }
  return total;
}

DfsDecomposition dfs_decomposition(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();

  std::vector<std::vector<Vertex>> sorted(n);
  for (Vertex v = 0; v < n; ++v) {
    for (const auto& nb : g.neighbors(v)) sorted[v].push_back(nb.to);
    std::sort(sorted[v].begin(), sorted[v].end());
  }

  DfsDecomposition out;
  out.depth.assign(n, kUnseen);
  out.root.assign(n, 0);

  struct Frame {
    Vertex v;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (Vertex r = 0; r < n; ++r) {
    if (out.depth[r] != kUnseen) continue;
    out.depth[r] = 0;
    out.root[r] = r;
    stack.push_back({r, 0});
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == sorted[top.v].size()) {
        stack.pop_back();
        continue;
      }
      const Vertex w = sorted[top.v][top.next++];
      if (out.depth[w] != kUnseen) continue;
      out.depth[w] = out.depth[top.v] + 1;
      out.root[w] = r;
      out.tree.push_back({top.v, w, out.depth[w]});
      stack.push_back({w, 0});
    }
  }

  std::size_t max_level = 0;
  for (const auto& e : out.tree) max_level = std::max(max_level, e.level);
  out.levels.resize(max_level);
  for (std::size_t i = 0; i < max_level; ++i) out.levels[i].index = i + 1;
  for (const auto& e : out.tree) out.levels[e.level - 1].edges.push_back(e);

  for (auto& level : out.levels) {
    auto edges = level.edges;
    std::stable_sort(edges.begin(), edges.end(),
                     [](const TreeEdge& a, const TreeEdge& b) { return a.parent < b.parent; });
    for (const auto& e : edges) {
      if (level.stars.empty() || level.stars.back().center != e.parent) {
        level.stars.push_back({e.parent, {}});
      }
      level.stars.back().leaves.push_back(e.child);
    }
  }
  return out;
}

namespace {

/// Strict total order on edges: true when edge a beats edge b.
bool heavier(const WeightedEdge& a, const WeightedEdge& b) {
  if (a.w != b.w) return a.w > b.w;
  const auto ka = std::make_pair(std::min(a.u, a.v), std::max(a.u, a.v));
  const auto kb = std::make_pair(std::min(b.u, b.v), std::max(b.u, b.v));
  return ka < kb;
}

}  // namespace

std::optional<std::size_t> heaviest_incident_edge(const WeightedGraph& g, Vertex v) {
  std::optional<std::size_t> best;
  for (const auto& nb : g.neighbors(v)) {
    if (!best || heavier(g.edges()[nb.edge], g.edges()[*best])) best = nb.edge;
  }
  return best;
}

HeaviestEdgeDecomposition heaviest_edge_decomposition(const WeightedGraph& g) {
  std::vector<int> votes(g.edge_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (auto e = heaviest_incident_edge(g, v)) ++votes[*e];
  }
  HeaviestEdgeDecomposition out;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edges()[i];
    if (votes[i] == 2) {
      out.matching.push_back(e);
      out.matching_weight += e.w;
    } else if (votes[i] == 1) {
      out.forest.push_back(e);
      out.forest_weight += e.w;
    }
  }
  return out;
}

BipartiteCheck is_bipartite(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr auto kNone = std::numeric_limits<Vertex>::max();
  BipartiteCheck out;
  out.color.assign(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<Vertex> parent(n, kNone);
  std::vector<std::size_t> depth(n, 0);
  std::deque<Vertex> queue;

  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    queue.push_back(s);
    while (!queue.empty()) {
      const Vertex a = queue.front();
      queue.pop_front();
      for (const auto& nb : g.neighbors(a)) {
        const Vertex b = nb.to;
        if (!seen[b]) {
          seen[b] = true;
          parent[b] = a;
          depth[b] = depth[a] + 1;
          out.color[b] = static_cast<std::uint8_t>(1 - out.color[a]);
          queue.push_back(b);
        } else if (out.color[b] == out.color[a]) {
          // Walk both endpoints up the BFS tree to their common ancestor.
          std::vector<Vertex> left{a}, right{b};
          Vertex x = a, y = b;
          while (depth[x] > depth[y]) left.push_back(x = parent[x]);
          while (depth[y] > depth[x]) right.push_back(y = parent[y]);
          while (x != y) {
            left.push_back(x = parent[x]);
            right.push_back(y = parent[y]);
          }
          right.pop_back();  // common ancestor already in `left`
          out.odd_cycle = std::move(left);
          out.odd_cycle.insert(out.odd_cycle.end(), right.rbegin(), right.rend());
          out.bipartite = false;
          return out;
        }
      }
    }
  }
  return out;
}

}  // namespace qmcs
