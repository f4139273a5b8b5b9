#include "qmcs/relaxation.hpp"
#include "qmcs/exact.hpp"
#include "qmcs/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qmcs {

VectorAssignment VectorAssignment::from_cut(std::span<const std::uint8_t> side, std::size_t rank) {
  if (rank == 0) throw std::invalid_argument("rank must be positive");
  VectorAssignment a;
  a.rank = rank;
  a.data.assign(side.size() * rank, 0.0);
  for (std::size_t v = 0; v < side.size(); ++v) a.data[v * rank] = side[v] ? -1.0 : 1.0;
  return a;
}

namespace {

struct DenseEdge {
  std::size_t u, v;
  double w;
};

std::vector<DenseEdge> dense_edges(const WeightedGraph& g) {
  std::vector<DenseEdge> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.push_back({e.u, e.v, to_double(e.w)});
  return out;
}

double objective(const std::vector<DenseEdge>& edges, const VectorAssignment& a) {
  double total = 0;
  for (const auto& e : edges) {
    const double* x = a.vector(e.u);
    const double* y = a.vector(e.v);
    double dot = 0;
    for (std::size_t k = 0; k < a.rank; ++k) dot += x[k] * y[k];
    total -= e.w * dot;
  }
  return total;
}

void normalize_rows(VectorAssignment& a) {
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    double* x = a.vector(v);
    double s = 0;
    for (std::size_t k = 0; k < a.rank; ++k) s += x[k] * x[k];
    s = std::sqrt(s);
    for (std::size_t k = 0; k < a.rank; ++k) x[k] /= s;
  }
}

/// Riemannian gradient of the objective; returns its Frobenius norm.
double riemannian_gradient(const std::vector<DenseEdge>& edges, const VectorAssignment& a,
                           std::vector<double>& grad) {
  const std::size_t r = a.rank;
  std::fill(grad.begin(), grad.end(), 0.0);
  for (const auto& e : edges) {
    const double* x = a.vector(e.u);
    const double* y = a.vector(e.v);
    for (std::size_t k = 0; k < r; ++k) {
      grad[e.u * r + k] -= e.w * y[k];
      grad[e.v * r + k] -= e.w * x[k];
    }
  }
  double norm2 = 0;
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    const double* x = a.vector(v);
    double* gv = grad.data() + v * r;
    double radial = 0;
    for (std::size_t k = 0; k < r; ++k) radial += gv[k] * x[k];
    for (std::size_t k = 0; k < r; ++k) {
      gv[k] -= radial * x[k];
      norm2 += gv[k] * gv[k];
    }
  }
  return std::sqrt(norm2);
}

struct Ascent {
  VectorAssignment assignment;
  double value;
  double gradient_norm;
  bool converged;
};

Ascent ascend(const std::vector<DenseEdge>& edges, VectorAssignment a, double step0,
              const RelaxationOptions& options) {
  std::vector<double> grad(a.data.size());
  double value = objective(edges, a);
  double step = step0;
  double gnorm = riemannian_gradient(edges, a, grad);
  VectorAssignment trial = a;
  for (std::size_t it = 0; it < options.max_iters && gnorm > options.tol; ++it) {
    for (std::size_t i = 0; i < a.data.size(); ++i) trial.data[i] = a.data[i] + step * grad[i];
    normalize_rows(trial);
    const double next = objective(edges, trial);
    if (next > value) {
      std::swap(a, trial);
      value = next;
      gnorm = riemannian_gradient(edges, a, grad);
    } else {
      step *= 0.5;
      if (step < 1e-14 * step0) break;
    }
  }
  return {std::move(a), value, gnorm, gnorm <= options.tol};
}

}  // namespace

double sdp_objective(const WeightedGraph& g, const VectorAssignment& a) {
  if (a.rank == 0 || a.data.size() != g.vertex_count() * a.rank) {
    throw std::invalid_argument("vector assignment does not match the graph");
  }
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    const double* x = a.vector(v);
    double s = 0;
    for (std::size_t k = 0; k < a.rank; ++k) s += x[k] * x[k];
    if (std::abs(std::sqrt(s) - 1.0) > 1e-10) {
      throw std::invalid_argument("vector of vertex " + std::to_string(v) + " is not unit length");
    }
  }
  return objective(dense_edges(g), a);
}

RelaxationResult solve_vector_program(const WeightedGraph& g, const RelaxationOptions& options) {
  const std::size_t n = g.vertex_count();
  const std::size_t rank = options.rank == 0 ? std::max<std::size_t>(n, 2) : options.rank;
  if (rank < 2) throw std::invalid_argument("vector program needs rank >= 2");
  const auto edges = dense_edges(g);

  double max_degree = 0;
  {
    std::vector<double> deg(n, 0.0);
    for (const auto& e : edges) {
      deg[e.u] += e.w;
      deg[e.v] += e.w;
    }
    for (double d : deg) max_degree = std::max(max_degree, d);
  }
  const double step0 = max_degree > 0 ? 1.0 / (2.0 * max_degree) : 1.0;

  RelaxationResult result;
  bool have = false;
  auto consider = [&](Ascent&& run) {
    if (!have || run.value > result.best_value) {
      result.best_value = run.value;
      result.assignment = std::move(run.assignment);
      result.gradient_norm = run.gradient_norm;
      result.converged = run.converged;
      have = true;
    }
  };

  const Rng root(options.seed);
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng = root.split(r);
    VectorAssignment start;
    std::optional<CutAssignment> cut;
    if (r == 0 && options.seed_with_cut) {
      try {
        cut = n <= kMaxBruteForceVertices ? max_cut_bruteforce(g) : max_cut_exact(g);
      } catch (const SizeError&) {
      }
    }
    if (cut) {
      auto exact = VectorAssignment::from_cut(cut->side, rank);
      std::vector<double> grad(exact.data.size());
      Ascent seeded{exact, objective(edges, exact), riemannian_gradient(edges, exact, grad), false};
      seeded.converged = seeded.gradient_norm <= options.tol;
      result.seeded_cut_value = seeded.value;
      consider(std::move(seeded));
      // A cut is often a saddle point; nudge it off before ascending.
      start = std::move(exact);
      for (auto& x : start.data) x += 1e-3 * rng.normal();
    } else {
      start.rank = rank;
      start.data.resize(n * rank);
      for (auto& x : start.data) x = rng.normal();
    }
    normalize_rows(start);
    consider(ascend(edges, std::move(start), step0, options));
    result.best_after_restart.push_back(result.best_value);
    ++result.restarts_used;
  }
  return result;
}

}  // namespace qmcs
