#include "qmcs/linalg.hpp"

#include <bit>

namespace qmcs {
namespace {

constexpr char kLetters[] = "IXYZ";

std::size_t qubits_for_dimension(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) throw LinalgError("dimension is not a power of two");
  return static_cast<std::size_t>(std::countr_zero(dim));
}

struct PauliString {
  std::size_t flip = 0;  // bits where the factor is X or Y
  std::vector<unsigned> digits;
};

PauliString unpack(std::size_t index, std::size_t qubits) {
  PauliString p;
  p.digits.resize(qubits);
  for (std::size_t k = 0; k < qubits; ++k) {
    const unsigned d = (index >> (2 * (qubits - 1 - k))) & 3u;
    p.digits[k] = d;
    if (d == 1 || d == 2) p.flip |= std::size_t{1} << (qubits - 1 - k);
  }
  return p;
}

/// Entry P(row, row ^ flip).
Complex entry(const PauliString& p, std::size_t row, std::size_t qubits) {
  Complex phase = 1.0;
  for (std::size_t k = 0; k < qubits; ++k) {
    const bool bit = (row >> (qubits - 1 - k)) & 1u;
    switch (p.digits[k]) {
      case 2: phase *= bit ? Complex(0, 1) : Complex(0, -1); break;
      case 3: if (bit) phase = -phase; break;
      default: break;
    }
  }
  return phase;
}

}  // namespace

std::string PauliDecomposition::label(std::size_t index, std::size_t qubits) {
  std::string s(qubits, 'I');
  for (std::size_t k = 0; k < qubits; ++k) s[k] = kLetters[(index >> (2 * (qubits - 1 - k))) & 3u];
  return s;
}

std::size_t PauliDecomposition::index_of(std::string_view label) {
  std::size_t index = 0;
  for (char ch : label) {
    unsigned d = 0;
    switch (ch) {
      case 'I': d = 0; break;
      case 'X': d = 1; break;
      case 'Y': d = 2; break;
      case 'Z': d = 3; break;
      default: throw LinalgError(std::string("bad Pauli letter '") + ch + "'");
    }
    index = index * 4 + d;
  }
  return index;
}

std::size_t PauliDecomposition::locality(std::size_t index, std::size_t qubits) {
  std::size_t count = 0;
  for (std::size_t k = 0; k < qubits; ++k) count += ((index >> (2 * k)) & 3u) != 0;
  return count;
}

Complex PauliDecomposition::coefficient(std::string_view label) const {
  if (label.size() != qubits) throw LinalgError("Pauli label length mismatch");
  return coefficients.at(index_of(label));
}

ComplexMatrix pauli_matrix(std::string_view label) {
  const std::size_t q = label.size();
  const auto p = unpack(PauliDecomposition::index_of(label), q);
  const std::size_t dim = std::size_t{1} << q;
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) m(r, r ^ p.flip) = entry(p, r, q);
  return m;
}

PauliDecomposition pauli_decompose(const ComplexMatrix& a) {
  if (!a.is_square()) throw LinalgError("Pauli decomposition of non-square matrix");
  const std::size_t q = qubits_for_dimension(a.rows());
  if (q > kMaxPauliQubits) throw LinalgError("too many qubits for Pauli decomposition");
  const std::size_t dim = a.rows();
  const std::size_t terms = std::size_t{1} << (2 * q);
  PauliDecomposition out;
  out.qubits = q;
  out.coefficients.assign(terms, 0.0);
  for (std::size_t index = 0; index < terms; ++index) {
    const auto p = unpack(index, q);
    // tr(P A) = sum_j P(j, j^f) A(j^f, j)
    Complex t = 0;
    for (std::size_t j = 0; j < dim; ++j) t += entry(p, j, q) * a(j ^ p.flip, j);
    out.coefficients[index] = t / static_cast<double>(dim);
  }
  return out;
}

ComplexMatrix pauli_reconstruct(const PauliDecomposition& d) {
  const std::size_t q = d.qubits;
  const std::size_t dim = std::size_t{1} << q;
  ComplexMatrix m(dim, dim);
  for (std::size_t index = 0; index < d.coefficients.size(); ++index) {
    const Complex c = d.coefficients[index];
    if (c == Complex{}) continue;
    const auto p = unpack(index, q);
    for (std::size_t r = 0; r < dim; ++r) m(r, r ^ p.flip) += c * entry(p, r, q);
  }
  return m;
}

}  // namespace qmcs
