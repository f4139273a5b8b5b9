#include "qmcs/linalg.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace qmcs;

namespace {

std::vector<Complex> singlet_amplitudes() {
  const double r = 1 / std::sqrt(2.0);
  return {0, r, -r, 0};
}

ComplexMatrix plus_state() { return ComplexMatrix(2, 2, {0.5, 0.5, 0.5, 0.5}); }

}  // namespace

TEST_CASE("hermitian_eigendecomposition examples") {
  auto vals = hermitian_eigenvalues(pauli_matrix("Z"));
  CHECK(vals[0] == doctest::Approx(-1).epsilon(1e-12));
  CHECK(vals[1] == doctest::Approx(1).epsilon(1e-12));

  vals = hermitian_eigenvalues(ComplexMatrix(2, 2));
  CHECK(std::abs(vals[0]) < 1e-15);
  CHECK(std::abs(vals[1]) < 1e-15);

  const auto s = singlet_amplitudes();
  vals = hermitian_eigenvalues(outer(s, s));
  REQUIRE(vals.size() == 4);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(vals[i]) < 1e-12);
  CHECK(std::abs(vals[3] - 1) < 1e-12);
}

TEST_CASE("hermitian_eigendecomposition rejects bad input") {
  CHECK_THROWS_AS(hermitian_eigendecomposition(ComplexMatrix(2, 2, {0, 1, 0, 0})), LinalgError);
  CHECK_THROWS_AS(hermitian_eigendecomposition(ComplexMatrix(2, 3)), LinalgError);
}

TEST_CASE("eigendecomposition residuals, orthonormality, trace and reconstruction") {
  Rng rng(1);
  for (int i = 0; i < 60; ++i) {
    const std::size_t d = 1 + rng.below(32);
    const auto a = random_hermitian(d, rng);
    const auto e = hermitian_eigendecomposition(a);
    const double scale = std::max(a.max_abs(), 1.0);
    ComplexMatrix lambda(d, d);
    for (std::size_t k = 0; k < d; ++k) lambda(k, k) = e.values[k];
    CHECK(max_abs_difference(a * e.vectors, e.vectors * lambda) <= 1e-9 * scale);
    CHECK(max_abs_difference(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(d)) <= 1e-10);
    CHECK(max_abs_difference(e.vectors * lambda * e.vectors.adjoint(), a) <= 1e-9 * scale);
    const double sum = std::accumulate(e.values.begin(), e.values.end(), 0.0);
    CHECK(std::abs(sum - a.trace().real()) <= 1e-9 * scale * d);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
  }
}

TEST_CASE("trace_norm examples") {
  CHECK(trace_norm(ComplexMatrix::identity(2)) == doctest::Approx(2).epsilon(1e-12));
  CHECK(trace_norm(pauli_matrix("X")) == doctest::Approx(2).epsilon(1e-12));
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto rho = random_density_matrix(1 + rng.below(3), rng);
    CHECK(std::abs(trace_norm(rho.matrix()) - 1) <= 1e-10);
  }
  CHECK_THROWS(trace_norm(ComplexMatrix(2, 3)));
}

TEST_CASE("trace_norm is a norm on 1000 random pairs") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 1 + rng.below(16);
    const auto a = random_matrix(d, d, rng), b = random_matrix(d, d, rng);
    const double na = trace_norm(a), nb = trace_norm(b);
    CHECK(trace_norm(a + b) <= na + nb + 1e-9);
    const Complex c(rng.normal(), rng.normal());
    CHECK(std::abs(trace_norm(a * c) - std::abs(c) * na) <= 1e-9 * std::max(1.0, std::abs(c) * na));
    CHECK(na + 1e-9 >= std::abs(a.trace()));
  }
}

TEST_CASE("schatten norms interpolate between trace and operator norms") {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_matrix(4, 4, rng);
    const auto sv = singular_values(a);
    CHECK(std::abs(schatten_norm(a, 1) - trace_norm(a)) < 1e-10);
    CHECK(std::abs(schatten_norm(a, 2) - a.frobenius_norm()) < 1e-10);
    CHECK(schatten_norm(a, 1.5) <= schatten_norm(a, 1.25) + 1e-12);
    CHECK(schatten_norm(a, 2) >= sv.front() - 1e-12);
  }
}

TEST_CASE("channels contract the trace norm on 500 random pairs") {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const std::size_t q = 1 + rng.below(2);
    const auto s = random_channel(q, 1 + rng.below(4), rng);
    const auto a = random_hermitian(std::size_t{1} << q, rng);
    CHECK(trace_norm(s.apply(a)) <= trace_norm(a) + 1e-9);
  }
}

TEST_CASE("pauli_decompose examples") {
  auto d = pauli_decompose(ComplexMatrix(2, 2, {1, 0, 0, 0}));
  CHECK(std::abs(d.coefficient("I") - 0.5) < 1e-12);
  CHECK(std::abs(d.coefficient("Z") - 0.5) < 1e-12);
  CHECK(std::abs(d.coefficient("X")) < 1e-12);
  CHECK(std::abs(d.coefficient("Y")) < 1e-12);

  const auto s = singlet_amplitudes();
  d = pauli_decompose(outer(s, s));
  CHECK(std::abs(d.coefficient("II") - 0.25) < 1e-12);
  for (const char* l : {"XX", "YY", "ZZ"}) CHECK(std::abs(d.coefficient(l) + 0.25) < 1e-12);
  double rest = 0;
  for (std::size_t k = 0; k < d.coefficients.size(); ++k) rest += std::abs(d.coefficients[k]);
  CHECK(std::abs(rest - 1.0) < 1e-12);

  d = pauli_decompose(pauli_matrix("XZ"));
  for (std::size_t k = 0; k < 16; ++k) {
    const double expect = PauliDecomposition::label(k, 2) == "XZ" ? 1.0 : 0.0;
    CHECK(std::abs(d.coefficients[k] - expect) < 1e-12);
  }
  CHECK_THROWS(pauli_decompose(ComplexMatrix(3, 3)));
}

TEST_CASE("pauli round-trip, real coefficients and locality") {
  Rng rng(6);
  for (int i = 0; i < 40; ++i) {
    const std::size_t q = 1 + rng.below(4);
    const auto a = random_hermitian(std::size_t{1} << q, rng);
    const auto d = pauli_decompose(a);
    for (const auto& c : d.coefficients) CHECK(std::abs(c.imag()) < 1e-12);
    CHECK(max_abs_difference(pauli_reconstruct(d), a) <= 1e-10);
  }
  CHECK(PauliDecomposition::locality(PauliDecomposition::index_of("XIZ"), 3) == 2);
  CHECK(PauliDecomposition::locality(PauliDecomposition::index_of("III"), 3) == 0);
  CHECK(PauliDecomposition::label(PauliDecomposition::index_of("YXZI"), 4) == "YXZI");
}

TEST_CASE("apply_superoperator examples") {
  Rng rng(7);
  const auto rho = random_density_matrix(1, rng);
  CHECK(max_abs_difference(apply_superoperator(Superoperator::identity(1), rho).matrix(), rho.matrix()) < 1e-14);
  const auto mixed = ComplexMatrix::identity(2) * Complex(0.5);
  CHECK(max_abs_difference(apply_superoperator(depolarizing_channel(1), rho).matrix(), mixed) < 1e-14);
  const DensityMatrix plus(plus_state());
  CHECK(max_abs_difference(apply_superoperator(measure_z_channel(1), plus).matrix(), mixed) < 1e-14);
  CHECK_THROWS_AS(apply_superoperator(Superoperator::identity(2), plus), LinalgError);
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix(2, 2, {1, 0, 0, 1})), LinalgError);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix(2, 2, {1.5, 0, 0, -0.5})), LinalgError);
  CHECK_NOTHROW(DensityMatrix(ComplexMatrix(2, 2, {0.5, 0, 0, 0.5})));
  CHECK(DensityMatrix::maximally_mixed(3).qubits() == 3);
}

TEST_CASE("random channels are CPTP and map states to states") {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const std::size_t q = 1 + rng.below(2);
    const auto s = random_channel(q, 1 + rng.below(4), rng);
    CHECK(s.is_channel());
    CHECK(s.trace_preservation_error() <= 1e-12);
    CHECK(s.choi_min_eigenvalue() >= -1e-10);
    CHECK(check_density(s.apply(random_density_matrix(q, rng).matrix())).ok());
  }
  CHECK_FALSE((Complex(2.0) * Superoperator::identity(1)).is_channel());
}

TEST_CASE("superoperator composition matches sequential application") {
  Rng rng(9);
  const auto a = random_channel(1, 2, rng), b = random_channel(1, 3, rng);
  const auto rho = random_density_matrix(1, rng).matrix();
  CHECK(max_abs_difference(a.then(b).apply(rho), b.apply(a.apply(rho))) < 1e-13);
  const auto u = random_unitary(2, rng);
  CHECK(max_abs_difference(unitary_channel(u).apply(rho), u * rho * u.adjoint()) < 1e-13);
}
