#include "qmcs/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qmcs {

StateVector StateVector::basis(std::size_t qubits, std::size_t index) {
  StateVector s;
  s.qubits = qubits;
  s.amplitudes.assign(std::size_t{1} << qubits, Complex{});
  s.amplitudes.at(index) = 1.0;
  return s;
}

double StateVector::norm() const noexcept {
  double s = 0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0) throw std::invalid_argument("cannot normalize the zero vector");
  for (auto& a : amplitudes) a /= n;
}

QmcOperator::QmcOperator(const WeightedGraph& g) : vertex_qubit_(g.vertex_count(), -1) {
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 0) continue;
    vertex_qubit_[v] = static_cast<std::int64_t>(qubit_vertex_.size());
    qubit_vertex_.push_back(v);
  }
  if (qubit_vertex_.size() > kMaxQmcQubits) {
    throw SizeError("exact Quantum Max-Cut supports at most " + std::to_string(kMaxQmcQubits) +
                    " non-isolated vertices, got " + std::to_string(qubit_vertex_.size()));
  }
  const std::size_t q = qubit_vertex_.size();
  for (const auto& e : g.edges()) {
    const std::size_t bu = std::size_t{1} << (q - 1 - static_cast<std::size_t>(vertex_qubit_[e.u]));
    const std::size_t bv = std::size_t{1} << (q - 1 - static_cast<std::size_t>(vertex_qubit_[e.v]));
    terms_.push_back({bu | bv, to_double(e.w) / 2.0});
  }
}

std::optional<std::size_t> QmcOperator::qubit_of(Vertex v) const {
  if (v >= vertex_qubit_.size() || vertex_qubit_[v] < 0) return std::nullopt;
  return static_cast<std::size_t>(vertex_qubit_[v]);
}

namespace {

template <class T>
void apply_parallel(const std::vector<QmcOperator::Term>& terms, std::size_t dim, const T* in, T* out) {
  // Term-major sweeps over cache-sized chunks, one chunk per iteration.
  constexpr std::size_t kChunk = 2048;
  const auto chunks = static_cast<std::int64_t>((dim + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static) if (dim >= 4096)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(dim, lo + kChunk);
    for (std::size_t x = lo; x < hi; ++x) out[x] = T{};
    for (const auto& t : terms) {
      for (std::size_t x = lo; x < hi; ++x) {
        if (std::popcount(x & t.mask) == 1) out[x] += t.half_weight * (in[x] - in[x ^ t.mask]);
      }
    }
  }
}

template <class T>
void apply_serial(const std::vector<QmcOperator::Term>& terms, std::size_t dim, const T* in, T* out) {
  for (std::size_t x = 0; x < dim; ++x) out[x] = T{};
  for (const auto& t : terms) {
    for (std::size_t x = 0; x < dim; ++x) {
      if (std::popcount(x & t.mask) == 1) out[x] += t.half_weight * (in[x] - in[x ^ t.mask]);
    }
  }
}

void check_sizes(std::size_t dim, std::size_t in, std::size_t out) {
  if (in != dim || out != dim) throw std::invalid_argument("state dimension does not match operator");
}

}  // namespace

void QmcOperator::apply(std::span<const double> in, std::span<double> out) const {
  check_sizes(dimension(), in.size(), out.size());
  apply_parallel(terms_, dimension(), in.data(), out.data());
}

void QmcOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  check_sizes(dimension(), in.size(), out.size());
  apply_parallel(terms_, dimension(), in.data(), out.data());
}

double QmcOperator::rayleigh_quotient(std::span<const Complex> psi) const {
  std::vector<Complex> image(psi.size());
  apply(psi, image);
  Complex num = 0;
  double den = 0;
  for (std::size_t x = 0; x < psi.size(); ++x) {
    num += std::conj(psi[x]) * image[x];
    den += std::norm(psi[x]);
  }
  if (den == 0) throw std::invalid_argument("Rayleigh quotient of the zero vector");
  return num.real() / den;
}

ComplexMatrix QmcOperator::dense() const {
  const std::size_t dim = dimension();
  if (dim > kMaxDenseDimension) throw SizeError("dense Hamiltonian too large");
  ComplexMatrix m(dim, dim);
  std::vector<Complex> col(dim), image(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::fill(col.begin(), col.end(), Complex{});
    col[c] = 1.0;
    apply(col, image);
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = image[r];
  }
  return m;
}

namespace serial {

void qmc_apply(const QmcOperator& op, std::span<const double> in, std::span<double> out) {
  check_sizes(op.dimension(), in.size(), out.size());
  apply_serial(op.terms(), op.dimension(), in.data(), out.data());
}

void qmc_apply(const QmcOperator& op, std::span<const Complex> in, std::span<Complex> out) {
  check_sizes(op.dimension(), in.size(), out.size());
  apply_serial(op.terms(), op.dimension(), in.data(), out.data());
}

}  // namespace serial

StateVector qmc_apply(const WeightedGraph& g, const StateVector& psi) {
  const QmcOperator op(g);
  if (psi.qubits != op.qubits()) throw std::invalid_argument("state qubit count does not match graph");
  StateVector out;
  out.qubits = psi.qubits;
  out.amplitudes.resize(psi.dimension());
  op.apply(psi.amplitudes, out.amplitudes);
  return out;
}

}  // namespace qmcs
