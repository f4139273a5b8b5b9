#include "qmcs/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace qmcs {

std::size_t FourierReport::total_violations() const {
  std::size_t total = 0;
  for (const auto& l : lemmas) total += l.violations;
  return total;
}

namespace {

class Tally {
 public:
  Tally(std::string name, double tol) { check_.name = std::move(name), check_.tolerance = tol; }

  /// excess: how far the observation overshoots the identity or bound.
  void record(double excess) {
    ++check_.checks;
    if (std::isnan(excess) || excess > check_.tolerance) ++check_.violations;
    if (std::isnan(excess)) check_.max_violation = excess;
    else check_.max_violation = std::max(check_.max_violation, excess);
  }
  void fail() {
    ++check_.checks;
    ++check_.violations;
  }
  LemmaCheck done() const { return check_; }

 private:
  LemmaCheck check_;
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() == 1 && a.cols() == 1 && !(b.rows() == 1 && b.cols() == 1)) return b * a(0, 0);
  if (b.rows() == 1 && b.cols() == 1 && !(a.rows() == 1 && a.cols() == 1)) return a * b(0, 0);
  return a * b;
}

double max_gap(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, max_abs_difference(a[i], b[i]));
  return worst;
}

std::vector<ToyProtocol> toy_protocols(Rng& rng, std::size_t count) {
  std::vector<ToyProtocol> out;
  out.push_back(ToyProtocol::parity_forwarding());
  out.push_back(ToyProtocol::second_ignores_input(rng()));
  out.push_back(ToyProtocol::identity(4, 2, 2, 3, rng()));
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 2 + rng.below(3);
    const std::size_t alpha_n = 1 + rng.below(n / 2);
    const std::size_t beta = 1 + rng.below(2);
    const std::size_t T = 1 + rng.below(3);
    out.push_back(ToyProtocol::random(n, alpha_n, beta, T, rng()));
  }
  return out;
}

}  // namespace

FourierReport run_fourier_verification(std::uint64_t seed, FourierSuiteOptions options) {
  const std::size_t scale = std::max<std::size_t>(options.scale, 1);
  const Rng root(seed);
  FourierReport report;
  report.seed = seed;
  std::uint64_t stream = 0;

  {
    Rng rng = root.split(stream++);
    Tally round("transform_roundtrip", 1e-10), direct("transform_vs_definition", 1e-10);
    for (std::size_t i = 0; i < 100 * scale; ++i) {
      const std::size_t n = 1 + rng.below(6);
      const auto f = random_matrix_table(n, 1 + rng.below(4), 1 + rng.below(4), rng);
      const auto fhat = transform(f);
      round.record(max_gap(inverse_transform(fhat).values, f.values));
      direct.record(max_gap(fhat.coeffs, direct_transform(f).coeffs));
    }
    report.lemmas.push_back(round.done());
    report.lemmas.push_back(direct.done());
  }

  {
    Rng rng = root.split(stream++);
    Tally t("matconv", 1e-9);
    for (std::size_t i = 0; i < 200 * scale; ++i) {
      const std::size_t n = 1 + rng.below(5);
      const std::size_t a = 1 + rng.below(3), b = 1 + rng.below(3), c = 1 + rng.below(3);
      const bool f_scalar = rng.below(4) == 0, g_scalar = !f_scalar && rng.below(3) == 0;
      const auto f = f_scalar ? random_scalar_table(n, false, rng) : random_matrix_table(n, a, b, rng);
      const auto g = g_scalar ? random_scalar_table(n, false, rng) : random_matrix_table(n, b, c, rng);
      const auto fg = BooleanTable::tabulate(n, f_scalar && g_scalar ? TableKind::scalar : TableKind::matrix,
                                             [&](std::uint64_t x) { return multiply(f[x], g[x]); });
      const auto fhat = transform(f), ghat = transform(g), fghat = transform(fg);
      double worst = 0;
      for (std::uint64_t S = 0; S < fg.size(); ++S) {
        ComplexMatrix acc = multiply(fhat[0], ghat[S]);
        for (std::uint64_t T = 1; T < fg.size(); ++T) acc += multiply(fhat[T], ghat[T ^ S]);
        worst = std::max(worst, max_abs_difference(acc, fghat[S]));
      }
      t.record(worst);
    }
    report.lemmas.push_back(t.done());
  }

  {
    Rng rng = root.split(stream++);
    Tally t("lopconv", 1e-9);
    for (std::size_t i = 0; i < 100 * scale; ++i) {
      const std::size_t n = 1 + rng.below(4);
      const std::size_t beta = 1 + rng.below(2);
      std::vector<Superoperator> family;
      for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) family.push_back(random_channel(beta, 1 + rng.below(3), rng));
      const std::size_t d = std::size_t{1} << beta;
      const auto f = random_matrix_table(n, d, d, rng);
      const auto g = BooleanTable::tabulate(n, TableKind::matrix, [&](std::uint64_t x) { return family[x].apply(f[x]); });
      const auto ahat = channel_fourier(n, family);
      const auto fhat = transform(f), ghat = transform(g);
      double worst = 0;
      for (std::uint64_t S = 0; S < g.size(); ++S) {
        ComplexMatrix acc(d, d);
        for (std::uint64_t T = 0; T < g.size(); ++T) acc += ahat[T].apply(fhat[S ^ T]);
        worst = std::max(worst, max_abs_difference(acc, ghat[S]));
      }
      t.record(worst);
    }
    report.lemmas.push_back(t.done());
  }

  {
    Rng rng = root.split(stream++);
    Tally t("parseval", 1e-10);
    for (std::size_t i = 0; i < 200 * scale; ++i) {
      const std::size_t n = 1 + rng.below(10);
      const auto f = random_scalar_table(n, true, rng);
      double lhs = 0, rhs = 0;
      for (const auto& v : f.values) lhs += std::norm(v(0, 0));
      lhs /= static_cast<double>(f.size());
      for (const auto& c : transform(f).coeffs) rhs += std::norm(c(0, 0));
      t.record(std::abs(lhs - rhs));
    }
    report.lemmas.push_back(t.done());
  }

  {
    Rng rng = root.split(stream++);
    Tally t("linearcon", 1e-10);
    for (std::size_t i = 0; i < 200 * scale; ++i) {
      const std::size_t n = 1 + rng.below(8);
      const std::size_t k = 1 + rng.below(5);
      const auto m = BitMatrix::random(k, n, rng);
      // Half the systems are built solvable.
      const std::uint64_t y = rng.coin() ? m.apply(rng() & ((std::uint64_t{1} << n) - 1)) : rng() & ((std::uint64_t{1} << k) - 1);
      const auto q = BooleanTable::tabulate(n, TableKind::scalar, [&](std::uint64_t x) {
        return ComplexMatrix(1, 1, {Complex(m.apply(x) == y ? 1.0 : 0.0)});
      });
      t.record(max_gap(constraint_indicator_coeffs(m, y).coeffs, direct_transform(q).coeffs));
    }
    report.lemmas.push_back(t.done());
  }

  {
    Rng rng = root.split(stream++);
    Tally t("zerocoeffs", 1e-10);
    for (std::size_t i = 0; i < 100 * scale; ++i) {
      const std::size_t n = 1 + rng.below(6);
      const std::size_t k = 1 + rng.below(4);
      const auto m = BitMatrix::random(k, n, rng);
      const auto g = random_matrix_table(k, 1 + rng.below(3), 1 + rng.below(3), rng);
      const auto f = BooleanTable::tabulate(n, TableKind::matrix, [&](std::uint64_t x) { return g[m.apply(x)]; });
      t.record(off_support_max(transform(f).coeffs, m));
    }
    report.lemmas.push_back(t.done());
  }

  {
    Rng rng = root.split(stream++);
    Tally t("channel_support", 1e-10);
    for (std::size_t i = 0; i < 100 * scale; ++i) {
      const std::size_t n = 1 + rng.below(5);
      const std::size_t k = 1 + rng.below(3);
      const std::size_t beta = 1 + rng.below(2);
      const auto m = BitMatrix::random(k, n, rng);
      std::vector<Superoperator> b;
      for (std::size_t y = 0; y < (std::size_t{1} << k); ++y) b.push_back(random_channel(beta, 1 + rng.below(3), rng));
      std::vector<Superoperator> family;
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) family.push_back(b[m.apply(x)]);
      std::vector<ComplexMatrix> coeffs;
      for (const auto& a : channel_fourier(n, family)) coeffs.push_back(a.matrix());
      t.record(off_support_max(coeffs, m));
    }
    report.lemmas.push_back(t.done());
  }

  for (const double p : {1.25, 1.5, 2.0}) {
    Rng rng = root.split(stream++);
    const std::string tag = "(p=" + std::string(p == 1.25 ? "1.25" : p == 1.5 ? "1.5" : "2") + ")";
    Tally stated("mathc" + tag, 1e-9), scale_free("mathc_scale_free" + tag, 1e-9);
    for (std::size_t i = 0; i < 200 * scale; ++i) {
      const std::size_t n = 1 + rng.below(5);
      const std::size_t d = 1 + rng.below(4);
      auto f = random_matrix_table(n, d, d, rng);
      const auto raw = mathc(f, p);
      scale_free.record(raw.lhs - raw.rhs * raw.rhs);
      double largest = 0;
      for (const auto& v : f.values) largest = std::max(largest, schatten_norm(v, p));
      for (auto& v : f.values) v *= Complex(1.0 / largest);
      const auto unit = mathc(f, p);
      stated.record(unit.lhs - unit.rhs);
    }
    report.lemmas.push_back(stated.done());
    report.lemmas.push_back(scale_free.done());
  }

  {
    Rng rng = root.split(stream++);
    std::vector<Tally> tallies;
    const double deltas[] = {0.0, 0.5, 1.0};
    for (const char* tag : {"matkklcor(delta=0)", "matkklcor(delta=0.5)", "matkklcor(delta=1)"}) tallies.emplace_back(tag, 1e-9);
    for (std::size_t i = 0; i < 1000 * scale; ++i) {
      const auto f = random_density_table(4, 2, rng);
      for (std::size_t j = 0; j < 3; ++j) {
        const auto rec = hypercontractivity_sums(f, deltas[j]);
        tallies[j].record(rec.lhs - rec.bound);
      }
    }
    for (const auto& t : tallies) report.lemmas.push_back(t.done());
  }

  {
    Rng rng = root.split(stream++);
    Tally phi("phibound", 1e-9), mass("mass_transfer", 1e-9);
    for (const auto& p : toy_protocols(rng, 50 * scale)) {
      try {
        const auto rec = phibound_experiment(p);
        phi.record(rec.lhs - rec.rhs);
      } catch (const std::logic_error&) {
        phi.fail();
      }
      mass.record(mass_transfer_error(p));
    }
    report.lemmas.push_back(phi.done());
    report.lemmas.push_back(mass.done());
  }

  return report;
}

}  // namespace qmcs
