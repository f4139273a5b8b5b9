#include "qmcs/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

namespace qmcs {

const char* to_string(TableKind kind) noexcept {
  switch (kind) {
    case TableKind::scalar: return "scalar";
    case TableKind::matrix: return "matrix";
    case TableKind::superoperator: return "superoperator";
  }
  return "?";
}

std::size_t max_table_bits(TableKind kind) noexcept {
  switch (kind) {
    case TableKind::scalar: return 12;
    case TableKind::matrix: return 8;
    case TableKind::superoperator: return 6;
  }
  return 0;
}

namespace {

int parity(std::uint64_t x) noexcept { return std::popcount(x) & 1; }

void check_bits(std::size_t n, TableKind kind) {
  if (n > max_table_bits(kind)) {
    throw SizeError(std::string(to_string(kind)) + " tables support n <= " + std::to_string(max_table_bits(kind)) +
                    ", got " + std::to_string(n));
  }
}

void check_shape(std::size_t n, TableKind kind, const std::vector<ComplexMatrix>& values) {
  check_bits(n, kind);
  if (values.size() != (std::size_t{1} << n)) throw std::invalid_argument("table needs 2^n entries");
  const auto r = values.front().rows(), c = values.front().cols();
  if (kind == TableKind::scalar && (r != 1 || c != 1)) throw std::invalid_argument("scalar entries must be 1 x 1");
  for (const auto& v : values)
    if (v.rows() != r || v.cols() != c) throw std::invalid_argument("table entries differ in shape");
}

std::vector<Complex> pack(const std::vector<ComplexMatrix>& values) {
  const std::size_t block = values.front().data().size();
  std::vector<Complex> buf(values.size() * block);
  for (std::size_t x = 0; x < values.size(); ++x) std::copy_n(values[x].data().begin(), block, buf.begin() + static_cast<std::ptrdiff_t>(x * block));
  return buf;
}

std::vector<ComplexMatrix> unpack(const std::vector<Complex>& buf, std::size_t count, std::size_t rows,
                                  std::size_t cols, Complex scale) {
  const std::size_t block = rows * cols;
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  for (std::size_t x = 0; x < count; ++x) {
    std::vector<Complex> data(buf.begin() + static_cast<std::ptrdiff_t>(x * block),
                              buf.begin() + static_cast<std::ptrdiff_t>((x + 1) * block));
    for (auto& z : data) z *= scale;
    out.emplace_back(rows, cols, std::move(data));
  }
  return out;
}

}  // namespace

BooleanTable::BooleanTable(std::size_t n_, TableKind kind_, std::vector<ComplexMatrix> values_)
    : n(n_), kind(kind_), values(std::move(values_)) {
  check_shape(n, kind, values);
}

BooleanTable BooleanTable::tabulate(std::size_t n, TableKind kind,
                                    const std::function<ComplexMatrix(std::uint64_t)>& f) {
  check_bits(n, kind);
  std::vector<ComplexMatrix> values;
  values.reserve(std::size_t{1} << n);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) values.push_back(f(x));
  return BooleanTable(n, kind, std::move(values));
}

BooleanTable BooleanTable::scalars(std::size_t n, std::span<const Complex> values) {
  std::vector<ComplexMatrix> out;
  out.reserve(values.size());
  for (const Complex z : values) out.emplace_back(1, 1, std::vector<Complex>{z});
  return BooleanTable(n, TableKind::scalar, std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

inline void butterfly(Complex* a, Complex* b, std::size_t block) {
  for (std::size_t e = 0; e < block; ++e) {
    const Complex u = a[e], v = b[e];
    a[e] = u + v;
    b[e] = u - v;
  }
}

}  // namespace

void fwht(std::span<Complex> data, std::size_t n, std::size_t block) {
  const std::size_t size = std::size_t{1} << n;
  if (data.size() != size * block) throw std::invalid_argument("fwht buffer size mismatch");
  const bool parallel = data.size() >= (std::size_t{1} << 14);
  Complex* base = data.data();
  for (std::size_t h = 1; h < size; h <<= 1) {
    const auto blocks = static_cast<std::int64_t>(size / (2 * h));
    const auto width = static_cast<std::int64_t>(h);
    if (blocks >= width) {
#pragma omp parallel for if (parallel) schedule(static)
      for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t j = static_cast<std::size_t>(b) * 2 * h;
        for (std::size_t i = j; i < j + h; ++i) butterfly(base + i * block, base + (i + h) * block, block);
      }
    } else {
      for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t j = static_cast<std::size_t>(b) * 2 * h;
#pragma omp parallel for if (parallel) schedule(static)
        for (std::int64_t i = 0; i < width; ++i) {
          const std::size_t k = j + static_cast<std::size_t>(i);
          butterfly(base + k * block, base + (k + h) * block, block);
        }
      }
    }
  }
}

namespace serial {

void fwht(std::span<Complex> data, std::size_t n, std::size_t block) {
  const std::size_t size = std::size_t{1} << n;
  if (data.size() != size * block) throw std::invalid_argument("fwht buffer size mismatch");
  for (std::size_t h = 1; h < size; h <<= 1)
    for (std::size_t j = 0; j < size; j += 2 * h)
      for (std::size_t i = j; i < j + h; ++i)
        for (std::size_t e = 0; e < block; ++e) {
          const Complex u = data[i * block + e], v = data[(i + h) * block + e];
          data[i * block + e] = u + v;
          data[(i + h) * block + e] = u - v;
        }
}

}  // namespace serial

FourierTable transform(const BooleanTable& f) {
  check_shape(f.n, f.kind, f.values);
  auto buf = pack(f.values);
  fwht(buf, f.n, f.rows() * f.cols());
  const double scale = std::ldexp(1.0, -static_cast<int>(f.n));
  return FourierTable{f.n, f.kind, unpack(buf, f.size(), f.rows(), f.cols(), scale)};
}

BooleanTable inverse_transform(const FourierTable& fhat) {
  check_shape(fhat.n, fhat.kind, fhat.coeffs);
  auto buf = pack(fhat.coeffs);
  const auto rows = fhat.coeffs.front().rows(), cols = fhat.coeffs.front().cols();
  fwht(buf, fhat.n, rows * cols);
  return BooleanTable(fhat.n, fhat.kind, unpack(buf, fhat.size(), rows, cols, 1.0));
}

FourierTable direct_transform(const BooleanTable& f) {
  check_shape(f.n, f.kind, f.values);
  const std::size_t size = f.size();
  const double scale = std::ldexp(1.0, -static_cast<int>(f.n));
  FourierTable out{f.n, f.kind, {}};
  out.coeffs.reserve(size);
  for (std::uint64_t s = 0; s < size; ++s) {
    ComplexMatrix acc(f.rows(), f.cols());
    for (std::uint64_t x = 0; x < size; ++x) {
      if (parity(x & s)) acc -= f.values[x];
      else acc += f.values[x];
    }
    out.coeffs.push_back(acc * Complex(scale));
  }
  return out;
}

std::vector<Superoperator> channel_fourier(std::size_t n, std::span<const Superoperator> family) {
  if (family.empty()) throw std::invalid_argument("empty channel family");
  const std::size_t qubits = family.front().qubits();
  std::vector<ComplexMatrix> mats;
  mats.reserve(family.size());
  for (const auto& a : family) {
    if (a.qubits() != qubits) throw std::invalid_argument("channel family mixes dimensions");
    mats.push_back(a.matrix());
  }
  const auto fhat = transform(BooleanTable(n, TableKind::superoperator, std::move(mats)));
  std::vector<Superoperator> out;
  out.reserve(fhat.size());
  for (const auto& c : fhat.coeffs) out.emplace_back(qubits, c);
  return out;
}

// ---------------------------------------------------------------------------

BitMatrix::BitMatrix(std::size_t n_, std::vector<std::uint64_t> rows_) : k(rows_.size()), n(n_), rows(std::move(rows_)) {
  if (n > 63) throw SizeError("bit matrices support at most 63 columns");
  for (const auto r : rows)
    if (r >> n) throw std::invalid_argument("bit matrix row exceeds its column count");
}

BitMatrix BitMatrix::identity(std::size_t n) {
  std::vector<std::uint64_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = std::uint64_t{1} << i;
  return BitMatrix(n, std::move(rows));
}

BitMatrix BitMatrix::random(std::size_t k, std::size_t n, Rng& rng) {
  std::vector<std::uint64_t> rows(k);
  const std::uint64_t mask = n == 0 ? 0 : (~std::uint64_t{0} >> (64 - n));
  for (auto& r : rows) r = rng() & mask;
  return BitMatrix(n, std::move(rows));
}

BitMatrix BitMatrix::matching(std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  std::vector<std::uint64_t> rows;
  std::uint64_t used = 0;
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n || u == v) throw std::invalid_argument("bad matching edge");
    const std::uint64_t r = (std::uint64_t{1} << u) | (std::uint64_t{1} << v);
    if (used & r) throw std::invalid_argument("matching edges share an endpoint");
    used |= r;
    rows.push_back(r);
  }
  return BitMatrix(n, std::move(rows));
}

std::uint64_t BitMatrix::apply(std::uint64_t x) const noexcept {
  std::uint64_t y = 0;
  for (std::size_t r = 0; r < k; ++r) y |= static_cast<std::uint64_t>(parity(rows[r] & x)) << r;
  return y;
}

std::uint64_t BitMatrix::transpose_apply(std::uint64_t s) const noexcept {
  std::uint64_t out = 0;
  for (std::size_t r = 0; r < k; ++r)
    if ((s >> r) & 1u) out ^= rows[r];
  return out;
}

namespace {

/// Row echelon form of [M | y]; returns (rank, consistent).
std::pair<std::size_t, bool> eliminate(const BitMatrix& m, std::uint64_t y) {
  std::vector<std::pair<std::uint64_t, int>> rows;
  for (std::size_t r = 0; r < m.k; ++r) rows.emplace_back(m.rows[r], static_cast<int>((y >> r) & 1u));
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.n && rank < rows.size(); ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot].first & bit)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r].first & bit)) {
        rows[r].first ^= rows[rank].first;
        rows[r].second ^= rows[rank].second;
      }
    }
    ++rank;
  }
  bool consistent = true;
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (rows[r].first == 0 && rows[r].second) consistent = false;
  return {rank, consistent};
}

}  // namespace

std::size_t BitMatrix::rank() const { return eliminate(*this, 0).first; }

bool BitMatrix::solvable(std::uint64_t y) const { return eliminate(*this, y).second; }

FourierTable constraint_indicator_coeffs(const BitMatrix& m, std::uint64_t y) {
  if (m.k > 12 || m.n > 12) throw SizeError("constraint systems support k, n <= 12");
  FourierTable out{m.n, TableKind::scalar, {}};
  out.coeffs.assign(std::size_t{1} << m.n, ComplexMatrix(1, 1));
  const auto [rank, consistent] = eliminate(m, y);
  if (!consistent) return out;
  // |q^-1(1)| / 2^n = 2^(n - rank) / 2^n
  const double mass = std::ldexp(1.0, -static_cast<int>(rank));
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << m.k); ++s) {
    out.coeffs[m.transpose_apply(s)](0, 0) = parity(s & y) ? -mass : mass;
  }
  return out;
}

double off_support_max(std::span<const ComplexMatrix> coeffs, const BitMatrix& m) {
  if (m.k > 20) throw SizeError("support enumeration supports k <= 20");
  std::unordered_set<std::uint64_t> support;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << m.k); ++s) support.insert(m.transpose_apply(s));
  double worst = 0;
  for (std::uint64_t S = 0; S < coeffs.size(); ++S)
    if (!support.contains(S)) worst = std::max(worst, coeffs[S].max_abs());
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

BitMatrix random_matching(std::size_t n, std::size_t alpha_n, Rng& rng) {
  std::vector<std::uint32_t> free(n);
  for (std::size_t v = 0; v < n; ++v) free[v] = static_cast<std::uint32_t>(v);
  std::size_t left = n;
  auto take = [&](std::size_t i) {
    const auto v = free[i];
    free[i] = free[--left];
    return v;
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < alpha_n; ++i) {
    const auto a = take(rng.below(left));
    const auto b = take(rng.below(left));
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return BitMatrix::matching(n, edges);
}

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0, 1}, {1, 0}}); }

}  // namespace

void ToyProtocol::validate() const {
  if (n > 6 || beta > 2 || T > 3) throw SizeError("toy protocols support n <= 6, beta <= 2, T <= 3");
  if (beta == 0) throw std::invalid_argument("messages need at least one qubit");
  if (2 * alpha_n > n) throw std::invalid_argument("matching size exceeds n/2");
  if (matchings.size() != T || channels.size() != T) throw std::invalid_argument("protocol needs T players");
  for (std::size_t t = 0; t < T; ++t) {
    const auto& m = matchings[t];
    if (m.k != alpha_n || m.n != n) throw std::invalid_argument("matching shape mismatch");
    std::uint64_t used = 0;
    for (const auto r : m.rows) {
      if (std::popcount(r) != 2 || (used & r)) throw std::invalid_argument("not a matching");
      used |= r;
    }
    if (channels[t].size() != (std::size_t{1} << alpha_n)) throw std::invalid_argument("need one channel per label vector");
    for (const auto& c : channels[t]) {
      if (c.qubits() != beta) throw std::invalid_argument("channel acts on the wrong number of qubits");
      if (!c.is_channel(1e-10)) throw LinalgError("player " + std::to_string(t + 1) + " uses a non-CPTP map");
    }
  }
}

ToyProtocol ToyProtocol::identity(std::size_t n, std::size_t alpha_n, std::size_t beta, std::size_t T,
                                  std::uint64_t seed) {
  Rng rng(seed);
  ToyProtocol p{"identity", n, alpha_n, beta, T, {}, {}};
  for (std::size_t t = 0; t < T; ++t) {
    p.matchings.push_back(random_matching(n, alpha_n, rng));
    p.channels.emplace_back(std::size_t{1} << alpha_n, Superoperator::identity(beta));
  }
  p.validate();
  return p;
}

ToyProtocol ToyProtocol::parity_forwarding() {
  ToyProtocol p{"parity-forwarding", 2, 1, 1, 2, {}, {}};
  const auto flip = unitary_channel(pauli_x());
  for (std::size_t t = 0; t < 2; ++t) {
    p.matchings.push_back(BitMatrix(2, {0b11}));
    p.channels.push_back({Superoperator::identity(1), flip});
  }
  p.validate();
  return p;
}

ToyProtocol ToyProtocol::second_ignores_input(std::uint64_t seed) {
  Rng rng(seed);
  ToyProtocol p{"second-ignores-input", 4, 1, 1, 2, {}, {}};
  p.matchings.push_back(random_matching(4, 1, rng));
  p.channels.push_back({random_channel(1, 2, rng), random_channel(1, 2, rng)});
  p.matchings.push_back(random_matching(4, 1, rng));
  p.channels.push_back({replacement_channel(random_density_matrix(1, rng)),
                        replacement_channel(random_density_matrix(1, rng))});
  p.validate();
  return p;
}

ToyProtocol ToyProtocol::random(std::size_t n, std::size_t alpha_n, std::size_t beta, std::size_t T,
                                std::uint64_t seed) {
  Rng rng(seed);
  ToyProtocol p{"random", n, alpha_n, beta, T, {}, {}};
  for (std::size_t t = 0; t < T; ++t) {
    p.matchings.push_back(random_matching(n, alpha_n, rng));
    std::vector<Superoperator> family;
    for (std::size_t y = 0; y < (std::size_t{1} << alpha_n); ++y) {
      family.push_back(random_channel(beta, 1 + rng.below(3), rng));
    }
    p.channels.push_back(std::move(family));
  }
  p.validate();
  return p;
}

std::vector<BooleanTable> protocol_states(const ToyProtocol& p) {
  p.validate();
  const std::size_t size = std::size_t{1} << p.n;
  const ComplexMatrix initial = DensityMatrix::basis_state(p.beta, 0).matrix();
  std::vector<BooleanTable> out;
  out.emplace_back(p.n, TableKind::matrix, std::vector<ComplexMatrix>(size, initial));
  for (std::size_t t = 0; t < p.T; ++t) {
    std::vector<ComplexMatrix> next;
    next.reserve(size);
    for (std::uint64_t x = 0; x < size; ++x) {
      auto rho = p.channels[t][p.matchings[t].apply(x)].apply(out.back().values[x]);
      if (!check_density(rho).ok()) throw LinalgError("protocol message is not a density matrix");
      next.push_back(std::move(rho));
    }
    out.emplace_back(p.n, TableKind::matrix, std::move(next));
  }
  return out;
}

ComplexMatrix protocol_phi(const ToyProtocol& p, std::size_t t) {
  if (t > p.T) throw std::invalid_argument("phi index exceeds T");
  const auto states = protocol_states(p);
  const std::size_t size = std::size_t{1} << p.n;
  const std::size_t label_bits = p.alpha_n * (p.T - t);
  if (label_bits > 20) throw SizeError("too many label completions to enumerate");
  const std::size_t completions = std::size_t{1} << label_bits;
  const std::uint64_t label_mask = (std::uint64_t{1} << p.alpha_n) - 1;
  const std::size_t d = std::size_t{1} << p.beta;
  ComplexMatrix acc(d, d);
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::uint64_t y = 0; y < completions; ++y) {
      ComplexMatrix rho = states[t].values[x];
      for (std::size_t s = t; s < p.T; ++s) {
        const std::uint64_t ys = (y >> (p.alpha_n * (s - t))) & label_mask;
        rho = p.channels[s][ys].apply(rho);
      }
      acc += rho;
    }
  }
  return acc * Complex(1.0 / static_cast<double>(size * completions));
}

PhiBoundRecord phibound_experiment(const ToyProtocol& p) {
  const auto states = protocol_states(p);
  PhiBoundRecord rec;
  rec.lhs = trace_norm(protocol_phi(p, p.T) - protocol_phi(p, 0));
  for (std::size_t t = 0; t < p.T; ++t) {
    const auto fhat = transform(states[t]);
    const auto& next = p.matchings[t];
    double sum = 0;
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << next.k); ++s) sum += trace_norm(fhat[next.transpose_apply(s)]);
    rec.per_step.push_back(sum);
    rec.rhs += sum;
  }
  if (rec.lhs > rec.rhs + 1e-9) {
    throw std::logic_error("phi bound violated by protocol " + p.name + ": " + std::to_string(rec.lhs) + " > " +
                           std::to_string(rec.rhs));
  }
  return rec;
}

double mass_transfer_error(const ToyProtocol& p) {
  const auto states = protocol_states(p);
  const std::size_t size = std::size_t{1} << p.n;
  double worst = 0;
  for (std::size_t t = 1; t <= p.T; ++t) {
    const auto& m = p.matchings[t - 1];
    std::vector<Superoperator> family;
    family.reserve(size);
    for (std::uint64_t x = 0; x < size; ++x) family.push_back(p.channels[t - 1][m.apply(x)]);
    const auto ahat = channel_fourier(p.n, family);
    const auto prev = transform(states[t - 1]);
    const auto cur = transform(states[t]);
    for (std::uint64_t S = 0; S < size; ++S) {
      ComplexMatrix acc(cur[S].rows(), cur[S].cols());
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << m.k); ++s) {
        const std::uint64_t mt = m.transpose_apply(s);
        acc += ahat[mt].apply(prev[mt ^ S]);
      }
      worst = std::max(worst, max_abs_difference(acc, cur[S]));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

HypercontractivityRecord hypercontractivity_sums(const BooleanTable& f, double delta) {
  if (!(delta >= 0 && delta <= 1)) throw std::invalid_argument("delta must lie in [0, 1]");
  if (f.kind != TableKind::matrix || f.rows() != f.cols() || !std::has_single_bit(f.rows())) {
    throw std::invalid_argument("hypercontractivity sums need 2^beta x 2^beta matrix entries");
  }
  for (const auto& v : f.values)
    if (trace_norm(v) > 1 + 1e-10) throw std::invalid_argument("entries must have trace norm at most 1");
  HypercontractivityRecord rec;
  rec.delta = delta;
  rec.beta = static_cast<std::size_t>(std::countr_zero(f.rows()));
  rec.bound = std::exp2(2 * delta * static_cast<double>(rec.beta));
  rec.level_l1.assign(f.n + 1, 0.0);
  rec.level_l1_sq.assign(f.n + 1, 0.0);
  const auto fhat = transform(f);
  for (std::uint64_t S = 0; S < fhat.size(); ++S) {
    const double tn = trace_norm(fhat[S]);
    const auto level = static_cast<std::size_t>(std::popcount(S));
    rec.level_l1[level] += tn;
    rec.level_l1_sq[level] += tn * tn;
    rec.lhs += std::pow(delta, static_cast<double>(level)) * tn * tn;
  }
  return rec;
}

MatrixHypercontractivityRecord mathc(const BooleanTable& f, double p) {
  if (!(p >= 1 && p <= 2)) throw std::invalid_argument("p must lie in [1, 2]");
  if (f.kind == TableKind::superoperator) throw std::invalid_argument("mathc takes scalar or matrix tables");
  MatrixHypercontractivityRecord rec;
  rec.p = p;
  double mean = 0;
  for (const auto& v : f.values) mean += std::pow(schatten_norm(v, p), p);
  rec.rhs = std::pow(mean / static_cast<double>(f.size()), 1.0 / p);
  const auto fhat = transform(f);
  for (std::uint64_t S = 0; S < fhat.size(); ++S) {
    const double norm = schatten_norm(fhat[S], p);
    rec.lhs += std::pow(p - 1, static_cast<double>(std::popcount(S))) * norm * norm;
  }
  return rec;
}

// ---------------------------------------------------------------------------

BooleanTable random_scalar_table(std::size_t n, bool real, Rng& rng) {
  return BooleanTable::tabulate(n, TableKind::scalar, [&](std::uint64_t) {
    const double re = rng.normal();
    const double im = real ? 0.0 : rng.normal();
    return ComplexMatrix(1, 1, {Complex(re, im)});
  });
}

BooleanTable random_matrix_table(std::size_t n, std::size_t rows, std::size_t cols, Rng& rng) {
  return BooleanTable::tabulate(n, TableKind::matrix, [&](std::uint64_t) { return random_matrix(rows, cols, rng); });
}

BooleanTable random_density_table(std::size_t n, std::size_t beta, Rng& rng) {
  return BooleanTable::tabulate(n, TableKind::matrix,
                                [&](std::uint64_t) { return random_density_matrix(beta, rng).matrix(); });
}

}  // namespace qmcs
