#include "qmcs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qmcs {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw LinalgError("matrix data size mismatch");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw LinalgError("ragged initializer");
    data.insert(data.end(), row.begin(), row.end());
  }
  return ComplexMatrix(r, c, std::move(data));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw LinalgError("trace of non-square matrix");
  Complex t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  double s = 0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::hermitian_error() const {
  if (!is_square()) throw LinalgError("hermiticity of non-square matrix");
  double err = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      err = std::max(err, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return err;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw LinalgError("dimension mismatch in +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw LinalgError("dimension mismatch in -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) noexcept {
  for (auto& z : data_) z *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw LinalgError("dimension mismatch in *");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw LinalgError("dimension mismatch");
  double m = 0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

// ---------------------------------------------------------------------------
// Jacobi
// ---------------------------------------------------------------------------

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

Eigensystem hermitian_eigendecomposition(const ComplexMatrix& input) {
  if (!input.is_square()) throw LinalgError("eigendecomposition of non-square matrix");
  const std::size_t n = input.rows();
  if (n > kMaxDenseDimension) throw LinalgError("dimension exceeds dense eigensolver limit");
  const double scale = std::max(1.0, input.max_abs());
  if (input.hermitian_error() > 1e-10 * scale) throw LinalgError("matrix is not Hermitian");

  ComplexMatrix a = input;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double frob = a.frobenius_norm();
  const double target = 1e-15 * std::max(frob, 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double g = std::abs(b);
        if (g <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && std::abs(app) + 100.0 * g == std::abs(app) &&
            std::abs(aqq) + 100.0 * g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0;
          continue;
        }
        const Complex phase = b / g;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * g);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on (p, q).
        const Complex gpp = c, gpq = s;
        const Complex gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = a(q, p) = 0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  Eigensystem out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  return hermitian_eigendecomposition(a).values;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  // Eigenvalues of the Hermitian dilation [[0, A], [A^dag, 0]] are +-sigma_i
  // (plus |rows - cols| zeros); this keeps small singular values accurate to
  // machine precision instead of its square root.
  const std::size_t r = a.rows(), c = a.cols();
  ComplexMatrix h(r + c, r + c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      h(i, r + j) = a(i, j);
      h(r + j, i) = std::conj(a(i, j));
    }
  auto values = hermitian_eigenvalues(h);
  std::sort(values.begin(), values.end(), std::greater<>());
  values.resize(std::min(r, c));
  for (auto& x : values) x = std::max(x, 0.0);
  return values;
}

double trace_norm(const ComplexMatrix& a) {
  if (!a.is_square()) throw LinalgError("trace norm of non-square matrix");
  if (a.rows() == 0) return 0.0;
  const double scale = std::max(1.0, a.max_abs());
  if (a.hermitian_error() <= 1e-14 * scale) {
    double s = 0;
    for (double x : hermitian_eigenvalues(a)) s += std::abs(x);
    return s;
  }
  const auto sv = singular_values(a);
  return std::accumulate(sv.begin(), sv.end(), 0.0);
}

double schatten_norm(const ComplexMatrix& a, double p) {
  if (p < 1.0) throw LinalgError("Schatten norm needs p >= 1");
  if (p == 1.0) return trace_norm(a);
  double s = 0;
  for (double x : singular_values(a)) s += std::pow(x, p);
  return std::pow(s, 1.0 / p);
}

}  // namespace qmcs
