#include "qmcs/exact.hpp"

#include <bit>
#include <deque>
#include <limits>

namespace qmcs {
namespace {

using boost::multiprecision::cpp_int;

/// Common denominator that turns every weight into an integer.
cpp_int weight_scale(const std::vector<WeightedEdge>& edges) {
  cpp_int scale = 1;
  for (const auto& e : edges) {
    const cpp_int d = boost::multiprecision::denominator(e.w);
    scale = scale / boost::multiprecision::gcd(scale, d) * d;
  }
  return scale;
}

/// Gray-code search over the cuts of a graph with vertices 0..n-1, vertex 0
/// pinned to side 0. Returns the lexicographically smallest optimal side
/// string.
std::vector<std::uint8_t> brute_force_sides(std::size_t n, const std::vector<WeightedEdge>& edges) {
  if (n > kMaxBruteForceVertices) {
    throw SizeError("brute-force max-cut supports at most " + std::to_string(kMaxBruteForceVertices) +
                    " vertices, got " + std::to_string(n));
  }
  std::vector<std::uint8_t> side(n, 0);
  if (n <= 1 || edges.empty()) return side;

  const cpp_int scale = weight_scale(edges);
  cpp_int total = 0;
  std::vector<std::int64_t> iw;
  iw.reserve(edges.size());
  for (const auto& e : edges) {
    const cpp_int scaled = boost::multiprecision::numerator(e.w) * (scale / boost::multiprecision::denominator(e.w));
    total += scaled;
    iw.push_back(static_cast<std::int64_t>(scaled));
  }
  if (total > cpp_int(std::numeric_limits<std::int64_t>::max() / 4)) {
    throw SizeError("edge weights too fine-grained for exact max-cut");
  }

  // CSR adjacency with integer weights.
  std::vector<std::size_t> offset(n + 1, 0);
  for (const auto& e : edges) {
    ++offset[e.u + 1];
    ++offset[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] += offset[i];
  std::vector<std::pair<Vertex, std::int64_t>> adj(offset[n]);
  {
    auto fill = offset;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      adj[fill[edges[i].u]++] = {edges[i].v, iw[i]};
      adj[fill[edges[i].v]++] = {edges[i].u, iw[i]};
    }
  }

  // Vertex k sits at bit (n - 1 - k) of `lex`, so numeric order on lex is
  // lexicographic order on the side string.
  std::int64_t cur = 0, best = 0;
  std::uint64_t lex = 0, best_lex = 0;
  const std::uint64_t steps = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < steps; ++i) {
    const std::size_t k = static_cast<std::size_t>(std::countr_zero(i)) + 1;
    std::int64_t delta = 0;
    for (std::size_t a = offset[k]; a < offset[k + 1]; ++a) {
      delta += side[adj[a].first] == side[k] ? adj[a].second : -adj[a].second;
    }
    side[k] ^= 1u;
    lex ^= std::uint64_t{1} << (n - 1 - k);
    cur += delta;
    if (cur > best || (cur == best && lex < best_lex)) {
      best = cur;
      best_lex = lex;
    }
  }
  for (std::size_t k = 0; k < n; ++k) side[k] = (best_lex >> (n - 1 - k)) & 1u;
  return side;
}

}  // namespace

Weight cut_value(const WeightedGraph& g, std::span<const std::uint8_t> side) {
  if (side.size() != g.vertex_count()) throw std::invalid_argument("cut assignment size mismatch");
  Weight value = 0;
  for (const auto& e : g.edges()) {
    if (side[e.u] != side[e.v]) value += e.w;
  }
  return value;
}

CutAssignment max_cut_bruteforce(const WeightedGraph& g) {
  CutAssignment out;
  out.side = brute_force_sides(g.vertex_count(), g.edges());
  out.value = cut_value(g, out.side);
  return out;
}

CutAssignment max_cut_exact(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> degree(n);
  std::vector<bool> removed(n, false);
  for (Vertex v = 0; v < n; ++v) degree[v] = g.degree(v);

  // A degree-one vertex can always be put opposite its neighbour, so it adds
  // its edge weight and can be deleted.
  struct Pruned {
    Vertex leaf, anchor;
  };
  std::vector<Pruned> pruned;
  std::deque<Vertex> queue;
  for (Vertex v = 0; v < n; ++v)
    if (degree[v] == 1) queue.push_back(v);
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    if (removed[v] || degree[v] != 1) continue;
    for (const auto& nb : g.neighbors(v)) {
      if (removed[nb.to]) continue;
      removed[v] = true;
      pruned.push_back({v, nb.to});
      if (--degree[nb.to] == 1) queue.push_back(nb.to);
      break;
    }
  }

  CutAssignment out;
  out.side.assign(n, 0);
  std::vector<std::int64_t> local(n, -1);
  for (Vertex s = 0; s < n; ++s) {
    if (removed[s] || degree[s] == 0 || local[s] >= 0) continue;
    std::vector<Vertex> members{s};
    local[s] = 0;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (const auto& nb : g.neighbors(members[head])) {
        if (removed[nb.to] || local[nb.to] >= 0) continue;
        local[nb.to] = static_cast<std::int64_t>(members.size());
        members.push_back(nb.to);
      }
    }
    std::vector<WeightedEdge> sub;
    for (const Vertex a : members)
      for (const auto& nb : g.neighbors(a)) {
        if (removed[nb.to] || a > nb.to) continue;
        sub.push_back({static_cast<Vertex>(local[a]), static_cast<Vertex>(local[nb.to]),
                       g.edges()[nb.edge].w});
      }
    // A bipartite component is cut completely by its 2-colouring.
    std::vector<std::uint8_t> color(members.size(), 2);
    bool bipartite = true;
    color[0] = 0;
    for (std::size_t head = 0; head < members.size() && bipartite; ++head) {
      for (const auto& nb : g.neighbors(members[head])) {
        if (removed[nb.to]) continue;
        auto& c = color[static_cast<std::size_t>(local[nb.to])];
        if (c == 2) c = static_cast<std::uint8_t>(1 - color[head]);
        else if (c == color[head]) bipartite = false;
      }
    }
    const auto sides = bipartite ? color : brute_force_sides(members.size(), sub);
    for (std::size_t i = 0; i < members.size(); ++i) out.side[members[i]] = sides[i];
  }
  for (auto it = pruned.rbegin(); it != pruned.rend(); ++it) {
    out.side[it->leaf] = static_cast<std::uint8_t>(1 - out.side[it->anchor]);
  }
  out.value = cut_value(g, out.side);
  return out;
}

}  // namespace qmcs
