#pragma once

#include "qmcs/errors.hpp"
#include "qmcs/linalg.hpp"
#include "qmcs/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qmcs {

// ---------------------------------------------------------------------------
// Tables on {0,1}^n. Coordinate i of x is bit i of the index, so
// x . S = popcount(x & S) mod 2.
// ---------------------------------------------------------------------------

enum class TableKind { scalar, matrix, superoperator };

const char* to_string(TableKind kind) noexcept;

std::size_t max_table_bits(TableKind kind) noexcept;  // 12, 8, 6

/// Values f(x) for every x. Scalars are 1 x 1 matrices; superoperator
/// entries are the d^2 x d^2 matrices of Superoperator.
struct BooleanTable {
  std::size_t n = 0;
  TableKind kind = TableKind::scalar;
  std::vector<ComplexMatrix> values;

  /// Throws SizeError beyond max_table_bits(kind), std::invalid_argument on
  /// a wrong entry count or entries of differing shape.
  BooleanTable(std::size_t n, TableKind kind, std::vector<ComplexMatrix> values);
  BooleanTable() = default;

  static BooleanTable tabulate(std::size_t n, TableKind kind,
                               const std::function<ComplexMatrix(std::uint64_t)>& f);
  static BooleanTable scalars(std::size_t n, std::span<const Complex> values);

  std::size_t size() const noexcept { return values.size(); }
  std::size_t rows() const noexcept { return values.empty() ? 0 : values.front().rows(); }
  std::size_t cols() const noexcept { return values.empty() ? 0 : values.front().cols(); }
  const ComplexMatrix& operator[](std::uint64_t x) const { return values.at(x); }
};

/// Coefficients fhat(S) for every S, same shape conventions as BooleanTable.
struct FourierTable {
  std::size_t n = 0;
  TableKind kind = TableKind::scalar;
  std::vector<ComplexMatrix> coeffs;

  std::size_t size() const noexcept { return coeffs.size(); }
  const ComplexMatrix& operator[](std::uint64_t s) const { return coeffs.at(s); }
};

/// Unnormalized Walsh-Hadamard butterflies on 2^n blocks of `block`
/// consecutive entries each; OpenMP over the butterfly pairs.
void fwht(std::span<Complex> data, std::size_t n, std::size_t block);

namespace serial {
void fwht(std::span<Complex> data, std::size_t n, std::size_t block);
}  // namespace serial

/// fhat(S) = 2^-n sum_x f(x) (-1)^{x.S} by butterflies.
FourierTable transform(const BooleanTable& f);
/// f(x) = sum_S fhat(S) (-1)^{x.S}.
BooleanTable inverse_transform(const FourierTable& fhat);
/// The defining sum, O(4^n); used as an oracle.
FourierTable direct_transform(const BooleanTable& f);

/// Entrywise Fourier transform of a family of linear maps indexed by x. The
/// coefficients are generally not channels.
std::vector<Superoperator> channel_fourier(std::size_t n, std::span<const Superoperator> family);

// ---------------------------------------------------------------------------
// Linear algebra over GF(2)
// ---------------------------------------------------------------------------

/// k x n matrix over GF(2); row r is a bit mask over the n columns.
struct BitMatrix {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<std::uint64_t> rows;

  BitMatrix() = default;
  BitMatrix(std::size_t n, std::vector<std::uint64_t> rows);

  static BitMatrix identity(std::size_t n);
  static BitMatrix random(std::size_t k, std::size_t n, Rng& rng);
  /// Incidence matrix of a matching: row i has the two endpoints of edge i.
  static BitMatrix matching(std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

  /// Mx as a k-bit mask.
  std::uint64_t apply(std::uint64_t x) const noexcept;
  /// M^T s as an n-bit mask.
  std::uint64_t transpose_apply(std::uint64_t s) const noexcept;
  std::size_t rank() const;
  /// Whether Mx = y has a solution.
  bool solvable(std::uint64_t y) const;
};

/// Coefficients of q(x) = [Mx = y] from the closed form: qhat(M^T s) =
/// |q^-1(1)| / 2^n (-1)^{s.y}, zero elsewhere.
FourierTable constraint_indicator_coeffs(const BitMatrix& m, std::uint64_t y);

/// Largest entry of any coefficient whose index is not of the form M^T s.
double off_support_max(std::span<const ComplexMatrix> coeffs, const BitMatrix& m);

// ---------------------------------------------------------------------------
// Toy one-way protocols
// ---------------------------------------------------------------------------

/// T players on n vertices; player t holds an alpha_n-edge matching and on
/// labels y applies channels[t][y] to the beta-qubit message. The first
/// message is |0...0>.
struct ToyProtocol {
  std::string name;
  std::size_t n = 0;
  std::size_t alpha_n = 0;
  std::size_t beta = 0;
  std::size_t T = 0;
  std::vector<BitMatrix> matchings;
  std::vector<std::vector<Superoperator>> channels;  // [t][y], y < 2^alpha_n

  /// Throws std::invalid_argument on shape errors, LinalgError when some
  /// channel is not CPTP, SizeError beyond n <= 6, beta <= 2, T <= 3.
  void validate() const;

  static ToyProtocol identity(std::size_t n, std::size_t alpha_n, std::size_t beta, std::size_t T,
                              std::uint64_t seed);
  /// n = 2, alpha_n = 1, T = 2, beta = 1: each player XORs its label into a
  /// classical bit.
  static ToyProtocol parity_forwarding();
  /// Player 1 random; player 2 discards its input and prepares a state that
  /// depends only on its labels.
  static ToyProtocol second_ignores_input(std::uint64_t seed);
  /// Random matchings and random channels.
  static ToyProtocol random(std::size_t n, std::size_t alpha_n, std::size_t beta, std::size_t T,
                            std::uint64_t seed);
};

/// f_0 = |0><0|, f_t(x) = B^t_{M_t x}(f_{t-1}(x)) for t = 0..T, each entry
/// checked to be a density matrix.
std::vector<BooleanTable> protocol_states(const ToyProtocol& p);

/// phi_t = E over x and uniform labels of players after t of the final
/// message, by enumeration.
ComplexMatrix protocol_phi(const ToyProtocol& p, std::size_t t);

struct PhiBoundRecord {
  double lhs = 0;  // ||phi_T - phi_0||_1
  double rhs = 0;  // sum_{t<T} sum_{s != 0} ||fhat_t(M_{t+1}^T s)||_1
  std::vector<double> per_step;  // inner sum for t = 0..T-1
};

/// Throws std::logic_error if lhs > rhs + 1e-9.
PhiBoundRecord phibound_experiment(const ToyProtocol& p);

/// Max entrywise gap in fhat_t(S) = sum_s Ahat^t_{M_t^T s} fhat_{t-1}(M_t^T s + S)
/// over all S, for t = 1..T.
double mass_transfer_error(const ToyProtocol& p);

// ---------------------------------------------------------------------------
// Norm inequalities
// ---------------------------------------------------------------------------

struct HypercontractivityRecord {
  double delta = 0;
  std::size_t beta = 0;
  double lhs = 0;    // sum_S delta^|S| ||fhat(S)||_1^2
  double bound = 0;  // 2^{2 delta beta}
  std::vector<double> level_l1;     // sum_{|S|=k} ||fhat(S)||_1
  std::vector<double> level_l1_sq;  // sum_{|S|=k} ||fhat(S)||_1^2
};

/// f must be matrix-valued, 2^beta x 2^beta, with ||f(x)||_1 <= 1 (to 1e-10),
/// and delta in [0, 1]; otherwise std::invalid_argument.
HypercontractivityRecord hypercontractivity_sums(const BooleanTable& f, double delta);

struct MatrixHypercontractivityRecord {
  double p = 0;
  double lhs = 0;  // sum_S (p-1)^|S| ||fhat(S)||_p^2
  double rhs = 0;  // (2^-n sum_x ||f(x)||_p^p)^{1/p}
};

/// Both sides of the matrix-valued hypercontractive inequality at 1 <= p <= 2.
/// The inequality as stated compares lhs with rhs and holds whenever
/// ||f(x)||_p <= 1; the scale-free form compares lhs with rhs^2.
MatrixHypercontractivityRecord mathc(const BooleanTable& f, double p);

// ---------------------------------------------------------------------------
// Random tables
// ---------------------------------------------------------------------------

BooleanTable random_scalar_table(std::size_t n, bool real, Rng& rng);
BooleanTable random_matrix_table(std::size_t n, std::size_t rows, std::size_t cols, Rng& rng);
BooleanTable random_density_table(std::size_t n, std::size_t beta, Rng& rng);

// ---------------------------------------------------------------------------
// Verification suite
// ---------------------------------------------------------------------------

struct LemmaCheck {
  std::string name;
  double tolerance = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double max_violation = 0;  // largest observed excess over the identity or bound
};

struct FourierReport {
  std::uint64_t seed = 0;
  std::vector<LemmaCheck> lemmas;
  std::size_t total_violations() const;
};

struct FourierSuiteOptions {
  std::size_t scale = 1;  // multiplies every run count; 0 is treated as 1
};

FourierReport run_fourier_verification(std::uint64_t seed, FourierSuiteOptions options = {});

}  // namespace qmcs
