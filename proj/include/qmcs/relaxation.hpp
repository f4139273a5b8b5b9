#pragma once

#include "qmcs/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qmcs {

/// One unit vector in R^rank per vertex, stored row by row.
struct VectorAssignment {
  std::size_t rank = 0;
  std::vector<double> data;

  std::size_t vertex_count() const noexcept { return rank == 0 ? 0 : data.size() / rank; }
  double* vector(std::size_t v) noexcept { return data.data() + v * rank; }
  const double* vector(std::size_t v) const noexcept { return data.data() + v * rank; }

  /// Rank-1 assignment +1 / -1 by side.
  static VectorAssignment from_cut(std::span<const std::uint8_t> side, std::size_t rank);
};

/// sum_uv w_uv * (-<f(u), f(v)>). Throws std::invalid_argument when a vector
/// is not unit length (to 1e-10) or the sizes disagree.
double sdp_objective(const WeightedGraph& g, const VectorAssignment& a);

struct RelaxationOptions {
  std::size_t rank = 0;  // 0 means rank = n
  std::size_t restarts = 8;
  double tol = 1e-7;  // on the Riemannian gradient norm
  std::size_t max_iters = 5000;
  std::uint64_t seed = 0x5eed;
  bool seed_with_cut = true;  // first restart starts at an optimal cut when one can be computed
};

struct RelaxationResult {
  double best_value = 0;
  VectorAssignment assignment;
  std::size_t restarts_used = 0;
  bool converged = false;  // for the restart that produced best_value
  double gradient_norm = 0;
  std::vector<double> best_after_restart;
  std::optional<double> seeded_cut_value;  // 2 MC - m
};

/// Projected gradient ascent on the product of unit spheres with restarts.
RelaxationResult solve_vector_program(const WeightedGraph& g, const RelaxationOptions& options = {});

}  // namespace qmcs
