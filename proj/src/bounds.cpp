#include "qmcs/exact.hpp"

#include <array>
#include <map>

namespace qmcs {

QmcBounds qmc_bounds(const WeightedGraph& g) {
  QmcBounds b;
  b.m = total_weight(g);
  b.W = max_incident_sum(g);
  b.upper = b.m / 2 + b.W / 4;
  b.lower_weighted = b.m / 5 + b.W / 10;
  if (g.is_unweighted()) b.lower_unweighted = b.m / 4 + b.W / 8;
  return b;
}

StarState star_optimal_state(std::size_t d) {
  if (d == 0) throw std::invalid_argument("star degree must be at least 1");
  const std::size_t q = d + 1;
  if (q > kMaxQmcQubits) throw SizeError("star too large for a state vector");

  // Restricted to one excitation, (I - SWAP)/2 on an edge acts as half the
  // graph Laplacian on the excitation's position.
  ComplexMatrix laplacian(q, q);
  laplacian(0, 0) = static_cast<double>(d);
  for (std::size_t leaf = 1; leaf < q; ++leaf) {
    laplacian(leaf, leaf) = 1.0;
    laplacian(0, leaf) = laplacian(leaf, 0) = -1.0;
  }
  const auto eig = hermitian_eigendecomposition(laplacian);

  StarState out;
  out.state.qubits = q;
  out.state.amplitudes.assign(std::size_t{1} << q, Complex{});
  for (std::size_t k = 0; k < q; ++k) {
    out.state.amplitudes[std::size_t{1} << (q - 1 - k)] = eig.vectors(k, q - 1);
  }
  out.state.normalize();

  WeightedGraph star(q);
  for (Vertex leaf = 1; leaf < q; ++leaf) star.add_edge(0, leaf);
  out.energy = QmcOperator(star).rayleigh_quotient(out.state.amplitudes);
  return out;
}

DensityMatrix strip_odd_local(const DensityMatrix& rho) {
  if (rho.qubits() > kMaxPauliQubits) throw SizeError("too many qubits to strip odd-local terms");
  auto d = pauli_decompose(rho.matrix());
  for (std::size_t i = 0; i < d.coefficients.size(); ++i) {
    if (PauliDecomposition::locality(i, d.qubits) % 2 == 1) d.coefficients[i] = 0;
  }
  auto m = pauli_reconstruct(d);
  auto h = m + m.adjoint();
  h *= 0.5;
  return DensityMatrix(std::move(h));
}

Weight dfs_level_value(const WeightedGraph& g, const DfsDecomposition& dfs) {
  if (!g.is_unweighted()) throw std::invalid_argument("DFS level construction needs unit weights");
  struct Parity {
    std::size_t edges = 0;
    Weight value = 0;
  };
  std::map<Vertex, std::array<Parity, 2>> per_component;
  for (const auto& level : dfs.levels) {
    for (const auto& star : level.stars) {
      auto& p = per_component[dfs.root[star.center]][level.index % 2];
      p.edges += star.leaves.size();
      p.value += Weight(static_cast<long long>(star.leaves.size()) + 1, 2);
    }
  }
  std::size_t chosen_edges = 0;
  Weight value = 0;
  for (const auto& [root, parity] : per_component) {
    const auto& even = parity[0];
    const auto& odd = parity[1];
    const bool take_even = even.edges > odd.edges || (even.edges == odd.edges && even.value >= odd.value);
    const auto& pick = take_even ? even : odd;
    chosen_edges += pick.edges;
    value += pick.value;
  }
  value += Weight(static_cast<long long>(g.edge_count() - chosen_edges), 4);
  return value;
}

ConstructiveEnergies constructive_energies(const WeightedGraph& g) {
  const Weight m = total_weight(g);
  const auto h = heaviest_edge_decomposition(g);
  ConstructiveEnergies c;
  c.matching_value = h.matching_weight + (m - h.matching_weight) / 4;
  c.forest_cut_value = (h.matching_weight + h.forest_weight) / 2;
  if (g.is_unweighted()) c.dfs_level_value = dfs_level_value(g, dfs_decomposition(g));
  return c;
}

Weight best_lower_bound(const WeightedGraph& g, const ConstructiveEnergies& c) {
  Weight best = total_weight(g) / 4;
  if (c.matching_value > best) best = c.matching_value;
  if (c.forest_cut_value > best) best = c.forest_cut_value;
  if (c.dfs_level_value && *c.dfs_level_value > best) best = *c.dfs_level_value;
  return best;
}

}  // namespace qmcs
