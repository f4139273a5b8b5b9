#include "qmcs/exact.hpp"
#include "qmcs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qmcs {

TridiagonalEigen tridiagonal_eigen(std::vector<double> d, std::vector<double> offdiag) {
  const int n = static_cast<int>(d.size());
  if (offdiag.size() + 1 < d.size()) throw LinalgError("tridiagonal: off-diagonal too short");
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = offdiag[i];
  std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);  // row-major, eigenvectors in columns
  for (int i = 0; i < n; ++i) z[i * n + i] = 1.0;

  // Implicit QL with Wilkinson-style shifts.
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw LinalgError("tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z[k * n + i + 1];
            z[k * n + i + 1] = s * z[k * n + i] + c * f;
            z[k * n + i] = c * z[k * n + i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
  TridiagonalEigen out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(static_cast<std::size_t>(n) * n);
  for (int c = 0; c < n; ++c) {
    out.values[c] = d[order[c]];
    for (int r = 0; r < n; ++r) out.vectors[c * n + r] = z[r * n + order[c]];
  }
  return out;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

struct Cycle {
  double value = 0;
  std::vector<double> vector;
  double residual = std::numeric_limits<double>::infinity();
};

/// One Lanczos cycle from a unit start vector; returns the top Ritz pair with
/// its true residual.
Cycle lanczos_cycle(const QmcOperator& op, std::vector<double> start, std::size_t krylov, double tol_abs,
                    std::size_t& matvecs) {
  const std::size_t dim = op.dimension();
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  basis.push_back(std::move(start));
  std::vector<double> w(dim);

  TridiagonalEigen ritz;
  for (std::size_t j = 0; j < krylov; ++j) {
    op.apply(basis[j], w);
    ++matvecs;
    const double a = dot(w, basis[j]);
    alpha.push_back(a);
    axpy(-a, basis[j], w);
    if (j > 0) axpy(-beta[j - 1], basis[j - 1], w);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) axpy(-dot(w, v), v, w);
    const double b = std::sqrt(dot(w, w));

    const bool exhausted = b <= 1e-13 * std::max(1.0, std::abs(a)) || j + 1 == krylov;
    if (exhausted || (j + 1) % 10 == 0) {
      ritz = tridiagonal_eigen(alpha, beta);
      const std::size_t k = alpha.size();
      const double estimate = b * std::abs(ritz.vectors[(k - 1) * k + (k - 1)]);
      if (exhausted || estimate <= 0.1 * tol_abs) break;
    }
    beta.push_back(b);
    for (auto& x : w) x /= b;
    basis.push_back(w);
  }

  const std::size_t k = alpha.size();
  Cycle out;
  out.vector.assign(dim, 0.0);
  for (std::size_t i = 0; i < k; ++i) axpy(ritz.vectors[(k - 1) * k + i], basis[i], out.vector);
  const double norm = std::sqrt(dot(out.vector, out.vector));
  for (auto& x : out.vector) x /= norm;

  op.apply(out.vector, w);
  ++matvecs;
  out.value = dot(out.vector, w);
  axpy(-out.value, out.vector, w);
  out.residual = std::sqrt(dot(w, w));
  return out;
}

}  // namespace

QmcExactResult qmc_exact(const WeightedGraph& g, const LanczosOptions& options) {
  const QmcOperator op(g);
  QmcExactResult result;
  if (op.terms().empty()) {
    result.witness = StateVector::basis(op.qubits(), 0);
    return result;
  }
  const double m = to_double(total_weight(g));
  const double tol_abs = options.tol * std::max(m, 1.0);
  const std::size_t dim = op.dimension();
  const std::size_t krylov = std::min(options.krylov_dim, dim);

  Rng root(options.seed);
  bool have = false;
  double best_residual = std::numeric_limits<double>::infinity();
  Cycle best;
  for (std::size_t r = 0; r < std::max<std::size_t>(options.restarts, 1); ++r) {
    Rng rng = root.split(r);
    std::vector<double> start(dim);
    for (auto& x : start) x = rng.normal();
    const double norm = std::sqrt(dot(start, start));
    for (auto& x : start) x /= norm;

    Cycle cycle;
    for (std::size_t c = 0; c < std::max<std::size_t>(options.max_cycles, 1); ++c) {
      cycle = lanczos_cycle(op, std::move(start), krylov, tol_abs, result.matvecs);
      if (cycle.residual <= tol_abs) break;
      start = cycle.vector;
    }
    best_residual = std::min(best_residual, cycle.residual);
    if (cycle.residual <= tol_abs && (!have || cycle.value > best.value)) {
      best = std::move(cycle);
      have = true;
    }
  }
  if (!have) {
    throw ConvergenceError("Lanczos did not converge; best residual " + std::to_string(best_residual),
                           best_residual);
  }
  result.value = best.value;
  result.residual = best.residual;
  result.witness.qubits = op.qubits();
  result.witness.amplitudes.assign(best.vector.begin(), best.vector.end());
  return result;
}

}  // namespace qmcs
