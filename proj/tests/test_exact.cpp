#include "graphs.hpp"
#include "qmcs/exact.hpp"

#include <doctest.h>

#include <cmath>

using namespace qmcs;
using namespace qmcs::testing;

namespace {

StateVector singlet() {
  StateVector s = StateVector::basis(2, 1);
  s.amplitudes[1] = 1 / std::sqrt(2.0);
  s.amplitudes[2] = -1 / std::sqrt(2.0);
  return s;
}

double dense_top(const WeightedGraph& g) {
  return hermitian_eigenvalues(QmcOperator(g).dense()).back();
}

double vec_norm(const StateVector& s) {
  double t = 0;
  for (const auto& a : s.amplitudes) t += std::norm(a);
  return std::sqrt(t);
}

std::vector<WeightedGraph> small_graphs() {
  std::vector<WeightedGraph> out;
  for (std::size_t n = 2; n <= 6; ++n)
    for (auto& g : connected_graphs(n)) out.push_back(std::move(g));
  return out;
}

}  // namespace

TEST_CASE("max_cut_bruteforce examples") {
  CHECK(max_cut_bruteforce(cycle_graph(3)).value == 2);
  CHECK(max_cut_bruteforce(cycle_graph(5)).value == 4);
  CHECK(max_cut_bruteforce(cycle_graph(6)).value == 6);
  CHECK(max_cut_bruteforce(make_graph(5, {{0, 3}, {0, 4}, {1, 3}, {2, 4}})).value == 4);
  CHECK_THROWS_AS(max_cut_bruteforce(WeightedGraph(25)), SizeError);
}

TEST_CASE("max_cut_bruteforce returns the lexicographically smallest optimum") {
  const auto c = max_cut_bruteforce(path_graph(3));
  CHECK(c.side == std::vector<std::uint8_t>{0, 1, 0});
  const auto t = max_cut_bruteforce(cycle_graph(3));
  CHECK(t.side == std::vector<std::uint8_t>{0, 0, 1});
}

TEST_CASE("max_cut_bruteforce agrees with naive enumeration and cut_value") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto g = random_graph(1 + rng.below(10), 0.5, rng, 6);
    const auto c = max_cut_bruteforce(g);
    CHECK(cut_value(g, c.side) == c.value);
    Weight best = 0;
    const std::size_t n = g.vertex_count();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::uint8_t> side(n);
      for (std::size_t v = 0; v < n; ++v) side[v] = mask >> v & 1;
      best = std::max(best, cut_value(g, side));
    }
    CHECK(c.value == best);
    CHECK(c.value <= total_weight(g));
  }
}

TEST_CASE("max_cut_exact matches brute force and scales past 24 vertices on sparse graphs") {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto g = random_graph(1 + rng.below(16), rng.uniform() * 0.3, rng, i % 2 ? 1 : 4);
    const auto c = max_cut_exact(g);
    CHECK(c.value == max_cut_bruteforce(g).value);
    CHECK(cut_value(g, c.side) == c.value);
  }
  const auto big = cycle_graph(64);
  CHECK(max_cut_exact(big).value == 64);
  CHECK_THROWS_AS(max_cut_exact(cycle_graph(63)), SizeError);
  CHECK_THROWS_AS(max_cut_exact(complete_graph(25)), SizeError);
}

TEST_CASE("qmc_apply examples") {
  const auto edge = path_graph(2);
  const auto s = singlet();
  const auto image = qmc_apply(edge, s);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(image.amplitudes[k] - s.amplitudes[k]) < 1e-14);
  CHECK(vec_norm(qmc_apply(edge, StateVector::basis(2, 0))) < 1e-15);
  CHECK(vec_norm(qmc_apply(cycle_graph(3), StateVector::basis(3, 0))) < 1e-15);
  CHECK_THROWS_AS(QmcOperator(path_graph(15)), SizeError);
}

TEST_CASE("QmcOperator ignores isolated vertices") {
  WeightedGraph g(6);
  g.add_edge(1, 4);
  const QmcOperator op(g);
  CHECK(op.qubits() == 2);
  CHECK_FALSE(op.qubit_of(0).has_value());
  CHECK(op.qubit_of(4).value() == 1);
  CHECK(std::abs(qmc_exact(g).value - 1) < 1e-9);
}

TEST_CASE("parallel and serial qmc_apply agree") {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto g = random_connected_graph(2 + rng.below(11), 0.4, rng, 5);
    const QmcOperator op(g);
    std::vector<double> in(op.dimension()), a(op.dimension()), b(op.dimension());
    for (auto& x : in) x = rng.normal();
    op.apply(in, a);
    serial::qmc_apply(op, in, b);
    double gap = 0;
    for (std::size_t k = 0; k < a.size(); ++k) gap = std::max(gap, std::abs(a[k] - b[k]));
    CHECK(gap < 1e-12);
  }
}

TEST_CASE("qmc_exact anchors") {
  CHECK(std::abs(qmc_exact(path_graph(2)).value - 1) < 1e-9);
  for (std::size_t d = 1; d <= 5; ++d)
    CHECK(std::abs(qmc_exact(star_graph(d)).value - (d + 1) / 2.0) < 1e-8);
  CHECK(std::abs(qmc_exact(cycle_graph(3)).value - 1.5) < 1e-8);
  CHECK(std::abs(dense_top(cycle_graph(3)) - 1.5) < 1e-9);
  CHECK(std::abs(qmc_exact(cycle_graph(4)).value - 3) < 1e-8);
  CHECK(qmc_exact(WeightedGraph(3)).value == 0);
}

TEST_CASE("qmc_exact residual and witness") {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto g = random_connected_graph(2 + rng.below(12), 0.3, rng, 3);
    const auto r = qmc_exact(g);
    const double m = to_double(total_weight(g));
    CHECK(r.residual <= 1e-9 * std::max(m, 1.0));
    CHECK(std::abs(r.witness.norm() - 1) < 1e-12);
    CHECK(std::abs(QmcOperator(g).rayleigh_quotient(r.witness.amplitudes) - r.value) < 1e-8);
  }
}

TEST_CASE("qmc_exact matches dense diagonalization for n <= 6") {
  for (const auto& g : small_graphs()) CHECK(std::abs(qmc_exact(g).value - dense_top(g)) < 1e-8);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto g = random_connected_graph(2 + rng.below(5), 0.5, rng, 8);
    CHECK(std::abs(qmc_exact(g).value - dense_top(g)) < 1e-8);
  }
}

TEST_CASE("qmc_bounds examples and algebra") {
  const auto tri = qmc_bounds(cycle_graph(3));
  CHECK(tri.upper == Weight(9) / 4);
  CHECK(tri.lower_unweighted.value() == Weight(9) / 8);
  CHECK(qmc_bounds(path_graph(2)).upper == 1);
  const auto empty = qmc_bounds(WeightedGraph(4));
  CHECK(empty.upper == 0);
  CHECK(empty.lower_weighted == 0);
  CHECK(empty.lower_unweighted.value() == 0);
  WeightedGraph w(2);
  w.add_edge(0, 1, 3);
  CHECK_FALSE(qmc_bounds(w).lower_unweighted.has_value());
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto b = qmc_bounds(random_graph(2 + rng.below(20), 0.3, rng));
    CHECK(*b.lower_unweighted * 2 == b.upper);
    CHECK(b.lower_weighted * 5 == b.upper * 2);
  }
}

TEST_CASE("sandwich bounds, exhaustive n <= 6 and random n <= 8") {
  std::size_t violations = 0;
  auto check = [&](const WeightedGraph& g) {
    const double q = qmc_exact(g).value;
    const auto b = qmc_bounds(g);
    violations += q > to_double(b.upper) + 1e-7;
    violations += q < to_double(b.lower_weighted) - 1e-7;
    if (b.lower_unweighted) violations += q < to_double(*b.lower_unweighted) - 1e-7;
    violations += q < to_double(max_cut_bruteforce(g).value) / 2 - 1e-7;
  };
  for (const auto& g : small_graphs()) check(g);
  Rng rng(7);
  for (int i = 0; i < 500; ++i) check(random_connected_graph(7 + rng.below(2), rng.uniform() * 0.5, rng));
  for (int i = 0; i < 500; ++i) check(random_graph(2 + rng.below(7), 0.5, rng, 8));
  CHECK(violations == 0);
}

TEST_CASE("star_optimal_state examples") {
  CHECK(std::abs(star_optimal_state(1).energy - 1) < 1e-9);
  CHECK(std::abs(star_optimal_state(2).energy - 1.5) < 1e-9);
  const auto s4 = star_optimal_state(4);
  CHECK(std::abs(s4.energy - 2.5) < 1e-9);
  CHECK(std::abs(QmcOperator(star_graph(4)).rayleigh_quotient(s4.state.amplitudes) - 2.5) < 1e-9);
  for (std::size_t k = 0; k < s4.state.dimension(); ++k)
    if (std::popcount(k) != 1) CHECK(std::abs(s4.state.amplitudes[k]) < 1e-14);
}

TEST_CASE("strip_odd_local examples") {
  const auto half = ComplexMatrix::identity(2) * Complex(0.5);
  CHECK(max_abs_difference(strip_odd_local(DensityMatrix::basis_state(1, 0)).matrix(), half) < 1e-12);
  CHECK(max_abs_difference(strip_odd_local(DensityMatrix(ComplexMatrix(2, 2, {0.5, 0.5, 0.5, 0.5}))).matrix(),
                           half) < 1e-12);
  const auto s = singlet();
  const auto rho = DensityMatrix::pure(s.amplitudes);
  CHECK(max_abs_difference(strip_odd_local(rho).matrix(), rho.matrix()) < 1e-12);
}

TEST_CASE("strip_odd_local keeps even-local terms and validity") {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const std::size_t q = 1 + rng.below(4);
    const auto rho = random_density_matrix(q, rng);
    const auto out = strip_odd_local(rho);
    CHECK(check_density(out.matrix()).ok());
    const auto a = pauli_decompose(rho.matrix()), b = pauli_decompose(out.matrix());
    for (std::size_t k = 0; k < a.coefficients.size(); ++k) {
      const bool even = PauliDecomposition::locality(k, q) % 2 == 0;
      CHECK(std::abs(b.coefficients[k] - (even ? a.coefficients[k] : Complex(0))) < 1e-10);
    }
  }
}

TEST_CASE("stripped product states earn 1/4 per crossing edge") {
  // Two disjoint subgraphs joined by crossing edges; the product of stripped
  // states keeps internal energies and earns w/4 on each crossing edge.
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const std::size_t a = 1 + rng.below(3), b = 1 + rng.below(3);
    const auto ra = random_density_matrix(a, rng), rb = random_density_matrix(b, rng);
    const auto sa = strip_odd_local(ra), sb = strip_odd_local(rb);
    WeightedGraph g(a + b), inner(a + b), cross(a + b);
    for (Vertex u = 0; u < a + b; ++u)
      for (Vertex v = u + 1; v < a + b; ++v) {
        if (rng.uniform() > 0.7) continue;
        const Weight w(1 + static_cast<int>(rng.below(4)));
        const bool crossing = (u < a) != (v < a);
        (crossing ? cross : inner).add_edge(u, v, w);
      }
    if (cross.edge_count() == 0) cross.add_edge(0, static_cast<Vertex>(a), 1);
    auto energy = [&](const WeightedGraph& h, const ComplexMatrix& rho) {
      // tr(Q rho) with Q built on all a + b qubits from Pauli strings.
      ComplexMatrix q(rho.rows(), rho.cols());
      for (const auto& e : h.edges()) {
        std::string l(a + b, 'I');
        for (const char p : {'X', 'Y', 'Z'}) {
          l[e.u] = l[e.v] = p;
          q -= pauli_matrix(l) * Complex(to_double(e.w) / 4);
        }
        q += ComplexMatrix::identity(rho.rows()) * Complex(to_double(e.w) / 4);
      }
      return (q * rho).trace().real();
    };
    const auto original = kron(ra.matrix(), rb.matrix());
    const auto stripped = kron(sa.matrix(), sb.matrix());
    CHECK(std::abs(energy(inner, stripped) - energy(inner, original)) < 1e-9);
    CHECK(std::abs(energy(cross, stripped) - to_double(total_weight(cross)) / 4) < 1e-9);
  }
}

TEST_CASE("constructive energies examples") {
  const auto fig = constructive_energies(dfs_figure_graph());
  CHECK(fig.dfs_level_value.value() == Weight(19) / 4);
  CHECK(constructive_energies(path_graph(2)).matching_value == 1);
  const auto p3 = constructive_energies(path_graph(3));
  CHECK(p3.dfs_level_value.value() == Weight(5) / 4);
  CHECK(std::abs(qmc_exact(path_graph(3)).value - 1.5) < 1e-9);
  WeightedGraph w(3);
  w.add_edge(0, 1, 2);
  w.add_edge(1, 2, 1);
  CHECK_FALSE(constructive_energies(w).dfs_level_value.has_value());
}

TEST_CASE("constructive energies are sound and beat the unweighted lower bound") {
  std::size_t violations = 0;
  auto check = [&](const WeightedGraph& g) {
    const double q = qmc_exact(g).value;
    const auto c = constructive_energies(g);
    const auto h = heaviest_edge_decomposition(g);
    const Weight m = total_weight(g);
    CHECK(c.matching_value == h.matching_weight + (m - h.matching_weight) / 4);
    CHECK(c.forest_cut_value == (h.matching_weight + h.forest_weight) / 2);
    violations += std::max(to_double(c.matching_value), to_double(c.forest_cut_value)) > q + 1e-7;
    if (c.dfs_level_value) {
      violations += to_double(*c.dfs_level_value) > q + 1e-7;
      if (is_connected(g)) violations += to_double(*c.dfs_level_value) <= to_double(*qmc_bounds(g).lower_unweighted) - 1e-7;
    }
    const Weight best = best_lower_bound(g, c);
    violations += best < m / 4 || to_double(best) > q + 1e-7;
  };
  for (const auto& g : small_graphs()) check(g);
  Rng rng(10);
  for (int i = 0; i < 300; ++i) check(random_connected_graph(2 + rng.below(7), rng.uniform() * 0.5, rng, i % 2 ? 1 : 8));
  CHECK(violations == 0);
}

TEST_CASE("tridiagonal_eigen matches dense eigenvalues") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const std::size_t k = 1 + rng.below(30);
    std::vector<double> d(k), e(k > 0 ? k - 1 : 0);
    for (auto& x : d) x = rng.normal();
    for (auto& x : e) x = rng.normal();
    ComplexMatrix a(k, k);
    for (std::size_t j = 0; j < k; ++j) a(j, j) = d[j];
    for (std::size_t j = 0; j + 1 < k; ++j) a(j, j + 1) = a(j + 1, j) = e[j];
    const auto t = tridiagonal_eigen(d, e);
    const auto ref = hermitian_eigenvalues(a);
    for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(t.values[j] - ref[j]) < 1e-10);
  }
}
