#pragma once

#include "qmcs/rng.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmcs {

using Complex = std::complex<double>;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;
  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  /// max |a_ij - conj(a_ji)|
  double hermitian_error() const;
  bool is_hermitian(double tol) const { return is_square() && hermitian_error() <= tol; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// |a><b|
ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b);
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);

// ---------------------------------------------------------------------------
// Spectral routines
// ---------------------------------------------------------------------------

struct Eigensystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column i pairs with values[i]
};

inline constexpr std::size_t kMaxDenseDimension = 1024;

/// Cyclic Jacobi rotations. Throws LinalgError when the input is not
/// Hermitian (to 1e-10 relative to its largest entry) or exceeds
/// kMaxDenseDimension.
Eigensystem hermitian_eigendecomposition(const ComplexMatrix& a);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Singular values, descending.
std::vector<double> singular_values(const ComplexMatrix& a);
/// Schatten 1-norm.
double trace_norm(const ComplexMatrix& a);
/// Schatten p-norm, p >= 1.
double schatten_norm(const ComplexMatrix& a, double p);

// ---------------------------------------------------------------------------
// Pauli basis. Labels read left to right from qubit 0, which is the most
// significant bit of a basis index (the kron convention).
// ---------------------------------------------------------------------------

struct PauliDecomposition {
  std::size_t qubits = 0;
  /// Indexed by the base-4 digits of the label (I=0, X=1, Y=2, Z=3), qubit 0
  /// most significant.
  std::vector<Complex> coefficients;

  Complex coefficient(std::string_view label) const;
  static std::string label(std::size_t index, std::size_t qubits);
  static std::size_t index_of(std::string_view label);
  /// Number of non-identity factors.
  static std::size_t locality(std::size_t index, std::size_t qubits);
};

inline constexpr std::size_t kMaxPauliQubits = 7;

ComplexMatrix pauli_matrix(std::string_view label);
PauliDecomposition pauli_decompose(const ComplexMatrix& a);
ComplexMatrix pauli_reconstruct(const PauliDecomposition& d);

// ---------------------------------------------------------------------------
// States and channels
// ---------------------------------------------------------------------------

struct DensityCheck {
  double hermitian_error = 0;
  double trace_error = 0;
  double min_eigenvalue = 0;
  bool ok() const;
};

DensityCheck check_density(const ComplexMatrix& m);

/// Hermitian, PSD, unit-trace matrix of dimension 2^qubits.
class DensityMatrix {
 public:
  /// Validates; throws LinalgError.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix basis_state(std::size_t qubits, std::size_t index);
  static DensityMatrix pure(std::span<const Complex> amplitudes);
  static DensityMatrix maximally_mixed(std::size_t qubits);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return m_.rows(); }
  std::size_t qubits() const noexcept;

 private:
  ComplexMatrix m_;
};

/// Linear map on d x d matrices stored as a d^2 x d^2 matrix acting on
/// row-major vectorizations: vec(rho)[i * d + j] = rho(i, j).
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(std::size_t qubits, ComplexMatrix matrix);

  static Superoperator identity(std::size_t qubits);
  static Superoperator zero(std::size_t qubits);
  static Superoperator from_kraus(std::span<const ComplexMatrix> kraus);
  static Superoperator from_map(std::size_t qubits,
                                const std::function<ComplexMatrix(const ComplexMatrix&)>& map);

  std::size_t qubits() const noexcept { return qubits_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << qubits_; }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  ComplexMatrix choi() const;
  double trace_preservation_error() const;
  double choi_min_eigenvalue() const;
  bool is_channel(double tol = 1e-10) const;

  /// next after this.
  Superoperator then(const Superoperator& next) const;

  Superoperator& operator+=(const Superoperator& o);
  Superoperator& operator*=(Complex s);
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
  friend Superoperator operator-(Superoperator a, const Superoperator& b) {
    a.m_ -= b.m_;
    return a;
  }
  friend Superoperator operator*(Complex s, Superoperator a) { return a *= s; }

 private:
  std::size_t qubits_ = 0;
  ComplexMatrix m_;
};

/// Throws LinalgError on dimension mismatch or when the image is not a
/// density matrix (which can only happen when s is not a channel).
DensityMatrix apply_superoperator(const Superoperator& s, const DensityMatrix& rho);

Superoperator unitary_channel(const ComplexMatrix& u);
/// rho -> tr(rho) I / d
Superoperator depolarizing_channel(std::size_t qubits);
/// Dephasing in the computational basis of every qubit.
Superoperator measure_z_channel(std::size_t qubits);
/// rho -> tr(rho) sigma
Superoperator replacement_channel(const DensityMatrix& sigma);

ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);
ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng);
DensityMatrix random_density_matrix(std::size_t qubits, Rng& rng);
/// Channel from a Haar-ish random isometry with `kraus_count` Kraus operators.
Superoperator random_channel(std::size_t qubits, std::size_t kraus_count, Rng& rng);

}  // namespace qmcs
