#pragma once

#include "qmcs/errors.hpp"
#include "qmcs/graph.hpp"
#include "qmcs/linalg.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace qmcs {

// ---------------------------------------------------------------------------
// Max-Cut
// ---------------------------------------------------------------------------

struct CutAssignment {
  std::vector<std::uint8_t> side;
  Weight value = 0;
};

inline constexpr std::size_t kMaxBruteForceVertices = 24;

Weight cut_value(const WeightedGraph& g, std::span<const std::uint8_t> side);

/// Optimal cut by Gray-code enumeration. Among optimal cuts returns the one
/// whose side string (side[0] side[1] ...) is lexicographically smallest.
CutAssignment max_cut_bruteforce(const WeightedGraph& g);

/// Optimal cut for sparse graphs: strips degree-one vertices, 2-colours
/// bipartite components and brute forces the rest (each must have at most
/// kMaxBruteForceVertices vertices, else SizeError). The returned assignment is optimal but
/// carries no tiebreak guarantee.
CutAssignment max_cut_exact(const WeightedGraph& g);

// ---------------------------------------------------------------------------
// Quantum Max-Cut Hamiltonian
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxQmcQubits = 14;

/// Amplitudes over the non-isolated vertices of a graph; qubit k is bit
/// (qubits - 1 - k) of the basis index.
struct StateVector {
  std::size_t qubits = 0;
  std::vector<Complex> amplitudes;

  static StateVector basis(std::size_t qubits, std::size_t index);
  std::size_t dimension() const noexcept { return amplitudes.size(); }
  double norm() const noexcept;
  void normalize();
};

/// Q = sum_uv w_uv (I - XX - YY - ZZ)/4 as a matrix-free operator.
class QmcOperator {
 public:
  /// Throws SizeError when the graph has more than kMaxQmcQubits
  /// non-isolated vertices.
  explicit QmcOperator(const WeightedGraph& g);

  std::size_t qubits() const noexcept { return qubit_vertex_.size(); }
  std::size_t dimension() const noexcept { return std::size_t{1} << qubits(); }
  /// Qubit index of v, or nullopt for isolated vertices.
  std::optional<std::size_t> qubit_of(Vertex v) const;
  const std::vector<Vertex>& qubit_vertices() const noexcept { return qubit_vertex_; }

  struct Term {
    std::size_t mask;  // both qubit bits of the edge
    double half_weight;
  };
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// out = Q in. Parallel over output amplitudes.
  void apply(std::span<const double> in, std::span<double> out) const;
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

  /// <psi|Q|psi> / <psi|psi>
  double rayleigh_quotient(std::span<const Complex> psi) const;

  /// Dense 2^q x 2^q matrix, for cross-checks at small q.
  ComplexMatrix dense() const;

 private:
  std::vector<Vertex> qubit_vertex_;
  std::vector<std::int64_t> vertex_qubit_;
  std::vector<Term> terms_;
};

namespace serial {

/// Reference action, one edge at a time over all basis states.
void qmc_apply(const QmcOperator& op, std::span<const double> in, std::span<double> out);
void qmc_apply(const QmcOperator& op, std::span<const Complex> in, std::span<Complex> out);

}  // namespace serial

/// Unnormalized image Q psi. psi must live on the graph's non-isolated vertices.
StateVector qmc_apply(const WeightedGraph& g, const StateVector& psi);

struct LanczosOptions {
  double tol = 1e-9;
  std::size_t restarts = 3;      // independent random starting vectors
  std::size_t krylov_dim = 200;  // per cycle
  std::size_t max_cycles = 30;   // explicit restarts from the Ritz vector
  std::uint64_t seed = 0x5eed;
};

struct QmcExactResult {
  double value = 0;
  StateVector witness;
  double residual = 0;  // ||Q v - value v||
  std::size_t matvecs = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// Largest eigenvalue of Q by Lanczos with full reorthogonalization; the
/// residual satisfies ||Q v - lambda v|| <= tol * max(m, 1).
QmcExactResult qmc_exact(const WeightedGraph& g, const LanczosOptions& options = {});

/// All eigenpairs of a symmetric tridiagonal matrix (implicit QL).
struct TridiagonalEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major, k x k
};
TridiagonalEigen tridiagonal_eigen(std::vector<double> diag, std::vector<double> offdiag);

// ---------------------------------------------------------------------------
// Closed-form bounds and constructions
// ---------------------------------------------------------------------------

struct QmcBounds {
  Weight m = 0;
  Weight W = 0;
  Weight upper = 0;           // m/2 + W/4
  Weight lower_weighted = 0;  // m/5 + W/10
  std::optional<Weight> lower_unweighted;  // m/4 + W/8, unit weights only
};

QmcBounds qmc_bounds(const WeightedGraph& g);

struct StarState {
  StateVector state;  // qubit 0 is the center
  double energy = 0;
};

/// Single-excitation state on K_{1,d} built from the top Laplacian eigenvector.
StarState star_optimal_state(std::size_t d);

/// Removes every odd-local Pauli term: (rho + rho^-)/2.
DensityMatrix strip_odd_local(const DensityMatrix& rho);

struct ConstructiveEnergies {
  Weight matching_value = 0;    // M + (m - M)/4
  Weight forest_cut_value = 0;  // (M + F)/2
  std::optional<Weight> dfs_level_value;  // unit weights only
};

/// Sum over stars of the chosen DFS levels of (d+1)/2, plus 1/4 per other
/// edge. In each component the parity class of levels with more edges is
/// chosen (ties go to the class with the larger value).
Weight dfs_level_value(const WeightedGraph& g, const DfsDecomposition& dfs);

ConstructiveEnergies constructive_energies(const WeightedGraph& g);

/// max of the applicable constructive values, never below m/4.
Weight best_lower_bound(const WeightedGraph& g, const ConstructiveEnergies& c);

}  // namespace qmcs
