#include "qmcs/linalg.hpp"
#include "qmcs/tolerance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qmcs {

bool DensityCheck::ok() const {
  return hermitian_error <= tolerance::kStructural * 10 && trace_error <= tolerance::kStructural * 10 &&
         min_eigenvalue >= -tolerance::kPsd;
}

DensityCheck check_density(const ComplexMatrix& m) {
  if (!m.is_square()) throw LinalgError("density matrix must be square");
  DensityCheck c;
  c.hermitian_error = m.hermitian_error();
  c.trace_error = std::abs(m.trace() - Complex(1.0));
  if (c.hermitian_error <= 1e-10) {
    const auto values = hermitian_eigenvalues(m);
    c.min_eigenvalue = values.empty() ? 0.0 : values.front();
  } else {
    c.min_eigenvalue = -std::numeric_limits<double>::infinity();
  }
  return c;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || !std::has_single_bit(m_.rows())) {
    throw LinalgError("density matrix dimension must be a power of two");
  }
  const auto check = check_density(m_);
  if (!check.ok()) {
    throw LinalgError("not a density matrix (hermitian error " + std::to_string(check.hermitian_error) +
                      ", trace error " + std::to_string(check.trace_error) + ", min eigenvalue " +
                      std::to_string(check.min_eigenvalue) + ")");
  }
}

std::size_t DensityMatrix::qubits() const noexcept {
  return static_cast<std::size_t>(std::countr_zero(m_.rows()));
}

DensityMatrix DensityMatrix::basis_state(std::size_t qubits, std::size_t index) {
  const std::size_t dim = std::size_t{1} << qubits;
  ComplexMatrix m(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> amplitudes) {
  double norm = 0;
  for (const auto& a : amplitudes) norm += std::norm(a);
  norm = std::sqrt(norm);
  if (norm == 0) throw LinalgError("zero state vector");
  std::vector<Complex> psi(amplitudes.begin(), amplitudes.end());
  for (auto& a : psi) a /= norm;
  return DensityMatrix(outer(psi, psi));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t qubits) {
  const std::size_t dim = std::size_t{1} << qubits;
  return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

// ---------------------------------------------------------------------------

Superoperator::Superoperator(std::size_t qubits, ComplexMatrix matrix)
    : qubits_(qubits), m_(std::move(matrix)) {
  const std::size_t d2 = std::size_t{1} << (2 * qubits);
  if (m_.rows() != d2 || m_.cols() != d2) throw LinalgError("superoperator dimension mismatch");
}

Superoperator Superoperator::identity(std::size_t qubits) {
  return Superoperator(qubits, ComplexMatrix::identity(std::size_t{1} << (2 * qubits)));
}

Superoperator Superoperator::zero(std::size_t qubits) {
  const std::size_t d2 = std::size_t{1} << (2 * qubits);
  return Superoperator(qubits, ComplexMatrix(d2, d2));
}

Superoperator Superoperator::from_kraus(std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) throw LinalgError("empty Kraus list");
  const std::size_t d = kraus.front().rows();
  if (d == 0 || !std::has_single_bit(d)) throw LinalgError("Kraus dimension must be a power of two");
  const std::size_t q = static_cast<std::size_t>(std::countr_zero(d));
  ComplexMatrix m(d * d, d * d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) throw LinalgError("Kraus operator dimension mismatch");
    // vec(K rho K^dag) = (K kron conj(K)) vec(rho) in row-major vectorization.
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t a = 0; a < d; ++a) {
          const Complex kia = k(i, a);
          if (kia == Complex{}) continue;
          for (std::size_t b = 0; b < d; ++b) m(i * d + j, a * d + b) += kia * std::conj(k(j, b));
        }
  }
  return Superoperator(q, std::move(m));
}

Superoperator Superoperator::from_map(std::size_t qubits,
                                      const std::function<ComplexMatrix(const ComplexMatrix&)>& map) {
  const std::size_t d = std::size_t{1} << qubits;
  ComplexMatrix m(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      ComplexMatrix e(d, d);
      e(a, b) = 1.0;
      const auto image = map(e);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i * d + j, a * d + b) = image(i, j);
    }
  return Superoperator(qubits, std::move(m));
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
  const std::size_t d = dimension();
  if (rho.rows() != d || rho.cols() != d) throw LinalgError("superoperator/state dimension mismatch");
  ComplexMatrix out(d, d);
  const auto in = rho.data();
  auto dst = out.data();
  const std::size_t d2 = d * d;
  for (std::size_t r = 0; r < d2; ++r) {
    Complex acc = 0;
    for (std::size_t c = 0; c < d2; ++c) acc += m_(r, c) * in[c];
    dst[r] = acc;
  }
  return out;
}

ComplexMatrix Superoperator::choi() const {
  const std::size_t d = dimension();
  ComplexMatrix j(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) j(a * d + i, b * d + k) = m_(i * d + k, a * d + b);
  return j;
}

double Superoperator::trace_preservation_error() const {
  const std::size_t d = dimension();
  double err = 0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      Complex t = 0;
      for (std::size_t i = 0; i < d; ++i) t += m_(i * d + i, a * d + b);
      err = std::max(err, std::abs(t - Complex(a == b ? 1.0 : 0.0)));
    }
  return err;
}

double Superoperator::choi_min_eigenvalue() const {
  const auto j = choi();
  if (j.hermitian_error() > 1e-10) return -std::numeric_limits<double>::infinity();
  return hermitian_eigenvalues(j).front();
}

bool Superoperator::is_channel(double tol) const {
  return trace_preservation_error() <= tolerance::kStructural * 10 && choi_min_eigenvalue() >= -tol;
}

Superoperator Superoperator::then(const Superoperator& next) const {
  if (next.qubits_ != qubits_) throw LinalgError("composition dimension mismatch");
  return Superoperator(qubits_, next.m_ * m_);
}

Superoperator& Superoperator::operator+=(const Superoperator& o) {
  if (o.qubits_ != qubits_) throw LinalgError("sum dimension mismatch");
  m_ += o.m_;
  return *this;
}

Superoperator& Superoperator::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

DensityMatrix apply_superoperator(const Superoperator& s, const DensityMatrix& rho) {
  if (s.dimension() != rho.dimension()) throw LinalgError("superoperator/state dimension mismatch");
  return DensityMatrix(s.apply(rho.matrix()));
}

Superoperator unitary_channel(const ComplexMatrix& u) {
  const ComplexMatrix kraus[] = {u};
  return Superoperator::from_kraus(kraus);
}

Superoperator depolarizing_channel(std::size_t qubits) {
  const std::size_t d = std::size_t{1} << qubits;
  return Superoperator::from_map(qubits, [d](const ComplexMatrix& rho) {
    return ComplexMatrix::identity(d) * (rho.trace() / static_cast<double>(d));
  });
}

Superoperator measure_z_channel(std::size_t qubits) {
  const std::size_t d = std::size_t{1} << qubits;
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < d; ++i) {
    ComplexMatrix p(d, d);
    p(i, i) = 1.0;
    kraus.push_back(std::move(p));
  }
  return Superoperator::from_kraus(kraus);
}

Superoperator replacement_channel(const DensityMatrix& sigma) {
  const ComplexMatrix s = sigma.matrix();
  return Superoperator::from_map(sigma.qubits(),
                                 [s](const ComplexMatrix& rho) { return s * rho.trace(); });
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) z = Complex(rng.normal(), rng.normal());
  return m;
}

namespace {

/// Orthonormalize the columns of m in place (modified Gram-Schmidt, twice).
void orthonormalize_columns(ComplexMatrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) {
        Complex dot = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) dot += std::conj(m(r, p)) * m(r, c);
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) -= dot * m(r, p);
      }
    }
    double norm = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) norm += std::norm(m(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) /= norm;
  }
}

}  // namespace

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  auto m = random_matrix(dim, dim, rng);
  orthonormalize_columns(m);
  return m;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
  auto g = random_matrix(dim, dim, rng);
  auto h = g + g.adjoint();
  h *= 0.5;
  return h;
}

DensityMatrix random_density_matrix(std::size_t qubits, Rng& rng) {
  const std::size_t d = std::size_t{1} << qubits;
  const std::size_t rank = 1 + rng.below(d);
  auto g = random_matrix(d, rank, rng);
  auto rho = g * g.adjoint();
  rho *= Complex(1.0 / rho.trace().real());
  for (std::size_t i = 0; i < d; ++i) {
    rho(i, i) = rho(i, i).real();
    for (std::size_t j = i + 1; j < d; ++j) rho(j, i) = std::conj(rho(i, j));
  }
  return DensityMatrix(std::move(rho));
}

Superoperator random_channel(std::size_t qubits, std::size_t kraus_count, Rng& rng) {
  const std::size_t d = std::size_t{1} << qubits;
  auto iso = random_matrix(kraus_count * d, d, rng);
  orthonormalize_columns(iso);
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < kraus_count; ++k) {
    ComplexMatrix block(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) block(i, j) = iso(k * d + i, j);
    kraus.push_back(std::move(block));
  }
  return Superoperator::from_kraus(kraus);
}

}  // namespace qmcs
