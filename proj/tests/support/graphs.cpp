#include "graphs.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace qmcs::testing {

WeightedGraph make_graph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  WeightedGraph g(n);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

WeightedGraph path_graph(std::size_t n) {
  WeightedGraph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

WeightedGraph cycle_graph(std::size_t n) {
  WeightedGraph g = path_graph(n);
  g.add_edge(static_cast<Vertex>(n - 1), 0);
  return g;
}

WeightedGraph complete_graph(std::size_t n) {
  WeightedGraph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

WeightedGraph star_graph(std::size_t leaves) {
  WeightedGraph g(leaves + 1);
  for (Vertex v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

WeightedGraph dfs_figure_graph() {
  return make_graph(8, {{0, 1}, {0, 6}, {1, 2}, {1, 5}, {2, 3}, {3, 4}, {3, 7},
                        {0, 5}, {1, 3}, {1, 7}, {0, 2}});
}

namespace {

using Mask = std::uint32_t;

std::vector<std::pair<int, int>> pair_list(std::size_t n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < static_cast<int>(n); ++u)
    for (int v = u + 1; v < static_cast<int>(n); ++v) pairs.emplace_back(u, v);
  return pairs;
}

bool mask_connected(std::size_t n, Mask mask, const std::vector<std::pair<int, int>>& pairs) {
  std::uint32_t reach = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      const auto [u, v] = pairs[i];
      const bool a = reach >> u & 1, b = reach >> v & 1;
      if (a != b) reach |= (1u << u) | (1u << v), grew = true;
    }
  }
  return reach == (1u << n) - 1;
}

}  // namespace

std::vector<WeightedGraph> connected_graphs(std::size_t n) {
  const auto pairs = pair_list(n);
  std::vector<std::vector<int>> index(n, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    index[pairs[i].first][pairs[i].second] = static_cast<int>(i);
    index[pairs[i].second][pairs[i].first] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::set<Mask> seen;
  std::vector<WeightedGraph> out;
  for (Mask mask = 0; mask < (Mask{1} << pairs.size()); ++mask) {
    if (n > 1 && static_cast<std::size_t>(std::popcount(mask)) < n - 1) continue;
    if (!mask_connected(n, mask, pairs)) continue;
    Mask canon = ~Mask{0};
    for (const auto& perm : perms) {
      Mask image = 0;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask >> i & 1) image |= Mask{1} << index[perm[pairs[i].first]][perm[pairs[i].second]];
      canon = std::min(canon, image);
    }
    if (!seen.insert(canon).second) continue;
    WeightedGraph g(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1) g.add_edge(pairs[i].first, pairs[i].second);
    out.push_back(std::move(g));
  }
  return out;
}

WeightedGraph random_graph(std::size_t n, double p, Rng& rng, int max_weight) {
  WeightedGraph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.uniform() < p) g.add_edge(u, v, Weight(1 + static_cast<int>(rng.below(max_weight))));
  return g;
}

WeightedGraph random_connected_graph(std::size_t n, double p, Rng& rng, int max_weight) {
  WeightedGraph g(n);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  for (std::size_t i = 1; i < n; ++i)
    g.add_edge(order[i], order[rng.below(i)], Weight(1 + static_cast<int>(rng.below(max_weight))));
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!g.has_edge(u, v) && rng.uniform() < p)
        g.add_edge(u, v, Weight(1 + static_cast<int>(rng.below(max_weight))));
  return g;
}

bool is_forest(std::size_t n, const std::vector<WeightedEdge>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    const auto a = find(e.u), b = find(e.v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

bool is_connected(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return true;
  std::vector<bool> seen(n);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const auto& nb : g.neighbors(v))
      if (!seen[nb.to]) seen[nb.to] = true, ++count, stack.push_back(nb.to);
  }
  return count == n;
}

}  // namespace qmcs::testing
