#include "qmcs/dihp.hpp"
#include "qmcs/relaxation.hpp"
#include "qmcs/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace qmcs {

const char* to_string(Truth t) noexcept { return t == Truth::yes ? "YES" : "NO"; }

const char* to_string(ProtocolMode mode) noexcept { return mode == ProtocolMode::maxcut ? "maxcut" : "qmc"; }

void DihpInstance::validate() const {
  if (matchings.size() != T || labels.size() != T) throw std::invalid_argument("instance must have T players");
  if (2 * alpha_n > n) throw std::invalid_argument("matching size exceeds n/2");
  for (std::size_t t = 0; t < T; ++t) {
    if (matchings[t].size() != alpha_n || labels[t].size() != alpha_n) {
      throw std::invalid_argument("player " + std::to_string(t) + " must hold alpha_n edges and labels");
    }
    std::vector<std::uint8_t> used(n, 0);
    for (const auto& [u, v] : matchings[t]) {
      if (!(u < v && v < n)) throw std::invalid_argument("matching edge out of range or not ordered");
      if (used[u] || used[v]) throw std::invalid_argument("matching edges share an endpoint");
      used[u] = used[v] = 1;
    }
    for (const auto b : labels[t])
      if (b > 1) throw std::invalid_argument("labels must be bits");
  }
  if (truth == Truth::yes) {
    if (!hidden_partition || hidden_partition->size() != n) {
      throw std::invalid_argument("YES instance needs a hidden partition");
    }
    const auto& x = *hidden_partition;
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t i = 0; i < alpha_n; ++i) {
        const auto [u, v] = matchings[t][i];
        if (labels[t][i] != (x[u] ^ x[v])) throw std::invalid_argument("YES label disagrees with the partition");
      }
  }
}

DihpInstance sample_instance(std::size_t n, std::size_t alpha_n, std::size_t T, Truth truth,
                             std::uint64_t seed) {
  if (T == 0) throw std::invalid_argument("need at least one player");
  if (alpha_n == 0 || 2 * alpha_n > n) throw std::invalid_argument("need 1 <= alpha_n <= n/2");
  if (n > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("n too large");
  Rng rng(seed);
  DihpInstance inst;
  inst.n = n;
  inst.alpha_n = alpha_n;
  inst.T = T;
  inst.truth = truth;
  if (truth == Truth::yes) {
    std::vector<std::uint8_t> x(n);
    for (auto& b : x) b = rng.coin();
    inst.hidden_partition = std::move(x);
  }
  std::vector<Vertex> free(n);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t v = 0; v < n; ++v) free[v] = static_cast<Vertex>(v);
    std::size_t left = n;
    auto take = [&](std::size_t i) {
      const Vertex v = free[i];
      free[i] = free[--left];
      return v;
    };
    std::vector<std::pair<Vertex, Vertex>> matching;
    std::vector<std::uint8_t> bits;
    for (std::size_t i = 0; i < alpha_n; ++i) {
      const Vertex a = take(rng.below(left));
      const Vertex b = take(rng.below(left));
      matching.emplace_back(std::min(a, b), std::max(a, b));
    }
    for (const auto& [u, v] : matching) {
      bits.push_back(truth == Truth::yes ? static_cast<std::uint8_t>((*inst.hidden_partition)[u] ^
                                                                     (*inst.hidden_partition)[v])
                                         : static_cast<std::uint8_t>(rng.coin()));
    }
    inst.matchings.push_back(std::move(matching));
    inst.labels.push_back(std::move(bits));
  }
  return inst;
}

EdgeStream reduce_to_stream(const DihpInstance& inst) {
  EdgeStream out;
  out.n = inst.n;
  std::unordered_set<std::uint64_t> earlier;
  for (std::size_t t = 0; t < inst.T; ++t) {
    const auto& matching = inst.matchings[t];
    for (std::size_t i = 0; i < matching.size(); ++i) {
      const auto [u, v] = matching[i];
      if (inst.labels[t][i] == 1 && !earlier.contains(edge_key(u, v))) out.edges.push_back({u, v, 1});
    }
    for (const auto& [u, v] : matching) earlier.insert(edge_key(u, v));
  }
  return out;
}

std::string serialize_instance(const DihpInstance& inst) {
  std::ostringstream out;
  out << "dihp " << inst.n << ' ' << inst.alpha_n << ' ' << inst.T << ' ' << to_string(inst.truth) << '\n';
  for (std::size_t t = 0; t < inst.T; ++t) {
    for (std::size_t i = 0; i < inst.matchings[t].size(); ++i) {
      if (i) out << ' ';
      out << inst.matchings[t][i].first << ':' << inst.matchings[t][i].second;
    }
    out << '\n';
    for (const auto b : inst.labels[t]) out << static_cast<char>('0' + b);
    out << '\n';
  }
  return out.str();
}

namespace {

std::size_t parse_count(const std::string& token, std::size_t line, const char* what) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos || token.size() > 12) {
    throw ParseError(line, std::string("bad ") + what + " '" + token + "'");
  }
  return std::stoull(token);
}

/// A 0/1 assignment with x_u ^ x_v equal to every label; nullopt if none.
std::optional<std::vector<std::uint8_t>> consistent_partition(const DihpInstance& inst) {
  std::vector<std::vector<std::pair<Vertex, std::uint8_t>>> adj(inst.n);
  for (std::size_t t = 0; t < inst.T; ++t)
    for (std::size_t i = 0; i < inst.alpha_n; ++i) {
      const auto [u, v] = inst.matchings[t][i];
      adj[u].emplace_back(v, inst.labels[t][i]);
      adj[v].emplace_back(u, inst.labels[t][i]);
    }
  std::vector<std::uint8_t> x(inst.n, 2);
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < inst.n; ++s) {
    if (x[s] != 2) continue;
    x[s] = 0;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex a = queue[head];
      for (const auto& [b, bit] : adj[a]) {
        const std::uint8_t want = x[a] ^ bit;
        if (x[b] == 2) {
          x[b] = want;
          queue.push_back(b);
        } else if (x[b] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return x;
}

}  // namespace

DihpInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(line_no, "empty instance");
  DihpInstance inst;
  {
    std::istringstream hs(line);
    std::string tag, n, a, t, truth, extra;
    hs >> tag >> n >> a >> t >> truth;
    if (tag != "dihp" || truth.empty() || (hs >> extra)) {
      throw ParseError(line_no, "header must read 'dihp n alpha_n T YES|NO'");
    }
    inst.n = parse_count(n, line_no, "n");
    inst.alpha_n = parse_count(a, line_no, "alpha_n");
    inst.T = parse_count(t, line_no, "T");
    if (truth == "YES") inst.truth = Truth::yes;
    else if (truth == "NO") inst.truth = Truth::no;
    else throw ParseError(line_no, "truth must be YES or NO");
    if (inst.T == 0 || 2 * inst.alpha_n > inst.n) throw ParseError(line_no, "infeasible parameters");
  }
  for (std::size_t t = 0; t < inst.T; ++t) {
    if (!next_line()) throw ParseError(line_no, "missing edges of player " + std::to_string(t));
    std::istringstream es(line);
    std::string token;
    std::vector<std::pair<Vertex, Vertex>> matching;
    while (es >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError(line_no, "edge must be u:v, got '" + token + "'");
      const std::size_t u = parse_count(token.substr(0, colon), line_no, "vertex");
      const std::size_t v = parse_count(token.substr(colon + 1), line_no, "vertex");
      if (u >= inst.n || v >= inst.n || u == v) throw ParseError(line_no, "bad edge '" + token + "'");
      matching.emplace_back(static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v)));
    }
    if (!next_line()) throw ParseError(line_no, "missing labels of player " + std::to_string(t));
    std::istringstream ls(line);
    std::string bits;
    ls >> bits;
    if ((ls >> token) || bits.find_first_not_of("01") != std::string::npos) {
      throw ParseError(line_no, "labels must be one string of 0/1");
    }
    std::vector<std::uint8_t> labels;
    for (const char c : bits) labels.push_back(static_cast<std::uint8_t>(c - '0'));
    inst.matchings.push_back(std::move(matching));
    inst.labels.push_back(std::move(labels));
  }
  if (next_line()) throw ParseError(line_no, "trailing content");
  if (inst.truth == Truth::yes) {
    inst.hidden_partition = consistent_partition(inst);
    if (!inst.hidden_partition) throw ParseError(line_no, "YES labels admit no hidden partition");
  }
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
  return inst;
}

// ---------------------------------------------------------------------------

namespace {

class StoredStream : public StreamingAlgorithm {
 public:
  explicit StoredStream(std::size_t n) { stream_.n = n; }
  void process_edge(const WeightedEdge& e) override { stream_.edges.push_back(e); }
  std::size_t state_words() const override { return 3 * stream_.edges.size(); }

 protected:
  EdgeStream stream_;
};

class ExactMaxCut final : public StoredStream {
 public:
  using StoredStream::StoredStream;
  double report() override { return to_double(max_cut_exact(WeightedGraph::from_stream(stream_)).value); }
  std::string name() const override { return "exact-maxcut"; }
};

class ExactQmc final : public StoredStream {
 public:
  using StoredStream::StoredStream;
  double report() override {
    if (stream_.edges.empty()) return 0.0;
    return qmc_exact(WeightedGraph::from_stream(stream_)).value;
  }
  std::string name() const override { return "exact-qmc"; }
};

class StreamingQmc final : public StreamingAlgorithm {
 public:
  StreamingQmc(double epsilon, double delta, std::uint64_t seed) : estimator_(epsilon, delta, seed) {}
  void process_edge(const WeightedEdge& e) override { estimator_.process_edge(e); }
  double report() override { return estimator_.finish().value; }
  std::size_t state_words() const override { return estimator_.bank().words_used(); }
  std::string name() const override { return "streaming-qmc"; }

 private:
  QmcStreamEstimator estimator_;
};

}  // namespace

std::unique_ptr<StreamingAlgorithm> exact_maxcut_algorithm(std::size_t n) {
  return std::make_unique<ExactMaxCut>(n);
}

std::unique_ptr<StreamingAlgorithm> exact_qmc_algorithm(std::size_t n) {
  return std::make_unique<ExactQmc>(n);
}

std::unique_ptr<StreamingAlgorithm> streaming_qmc_algorithm(double epsilon, double delta,
                                                            std::uint64_t seed) {
  return std::make_unique<StreamingQmc>(epsilon, delta, seed);
}

ProtocolTranscript run_protocol(const DihpInstance& inst, StreamingAlgorithm& algorithm,
                                ProtocolMode mode, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  ProtocolTranscript out;
  const std::size_t log_n = inst.n <= 1 ? 1 : static_cast<std::size_t>(std::bit_width(inst.n - 1));
  out.counter_bits = 2 * log_n;
  const std::size_t counter_words = (out.counter_bits + 63) / 64;

  // Each player appends its own label-1 edges that no earlier player held.
  std::unordered_set<std::uint64_t> earlier;
  for (std::size_t t = 0; t < inst.T; ++t) {
    const auto& matching = inst.matchings[t];
    for (std::size_t i = 0; i < matching.size(); ++i) {
      const auto [u, v] = matching[i];
      if (inst.labels[t][i] == 1 && !earlier.contains(edge_key(u, v))) {
        algorithm.process_edge({u, v, 1});
        ++out.m;
      }
    }
    for (const auto& [u, v] : matching) earlier.insert(edge_key(u, v));
    out.handoff_words.push_back(algorithm.state_words() + counter_words);
  }
  const double m = static_cast<double>(out.m);
  out.threshold = m / ((mode == ProtocolMode::maxcut ? 2.0 : 4.0) - epsilon);
  out.reported = out.m == 0 ? 0.0 : algorithm.report();
  out.decision = out.reported >= out.threshold ? Truth::yes : Truth::no;
  return out;
}

// ---------------------------------------------------------------------------

Summary Summary::of(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0;
  s.min = s.max = xs.front();
  for (const double x : xs) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (const double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return s;
}

std::optional<double> SeparationReport::maxcut_separation_in_se() const {
  if (!yes.maxcut_ratio || !no.maxcut_ratio) return std::nullopt;
  const double gap = yes.maxcut_ratio->mean - no.maxcut_ratio->mean;
  const double se = std::hypot(yes.maxcut_ratio->std_error, no.maxcut_ratio->std_error);
  if (se == 0) return gap == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), gap);
  return gap / se;
}

TrialRecord separation_trial(std::size_t n, std::size_t alpha_n, std::size_t T, Truth truth,
                             std::uint64_t seed, const SeparationCompute& compute) {
  const auto inst = sample_instance(n, alpha_n, T, truth, seed);
  const auto stream = reduce_to_stream(inst);
  const auto g = WeightedGraph::from_stream(stream);
  TrialRecord r;
  r.truth = truth;
  r.m = stream.edges.size();
  r.bipartite = is_bipartite(g).bipartite;
  if (truth == Truth::yes) {
    const auto& x = *inst.hidden_partition;
    for (const auto& e : stream.edges) r.bipartite = r.bipartite && x[e.u] != x[e.v];
  }
  const double m = static_cast<double>(r.m);
  if (compute.maxcut) {
    const Weight mc = max_cut_exact(g).value;
    r.maxcut_ratio = r.m == 0 ? 1.0 : to_double(mc) / m;
    if (truth == Truth::yes && mc != Weight(r.m)) r.bipartite = false;
  }
  if (compute.sdp && r.m > 0) {
    RelaxationOptions opts;
    opts.restarts = 3;
    opts.seed = derive_seed(seed, 1);
    r.sdp_over_m = solve_vector_program(g, opts).best_value / m;
  }
  if (compute.qmc_exact && r.m > 0) r.qmc_ratio = qmc_exact(g).value / m;
  return r;
}

namespace {

void check_request(std::size_t n, std::size_t alpha_n, std::size_t T, const SeparationCompute& compute) {
  if (T == 0 || alpha_n == 0 || 2 * alpha_n > n) throw std::invalid_argument("infeasible instance parameters");
  if (compute.qmc_exact && n > kMaxQmcQubits) {
    throw std::invalid_argument("qmc_exact needs n <= " + std::to_string(kMaxQmcQubits));
  }
}

SideStats side_stats(const std::vector<TrialRecord>& records, Truth truth) {
  std::vector<double> m, mc, sdp, qmc;
  std::size_t bipartite = 0, count = 0;
  for (const auto& r : records) {
    if (r.truth != truth) continue;
    ++count;
    m.push_back(static_cast<double>(r.m));
    if (r.bipartite) ++bipartite;
    if (r.maxcut_ratio) mc.push_back(*r.maxcut_ratio);
    if (r.sdp_over_m) sdp.push_back(*r.sdp_over_m);
    if (r.qmc_ratio) qmc.push_back(*r.qmc_ratio);
  }
  SideStats s;
  s.m = Summary::of(m);
  s.bipartite_rate = count == 0 ? 0.0 : static_cast<double>(bipartite) / static_cast<double>(count);
  if (!mc.empty()) s.maxcut_ratio = Summary::of(mc);
  if (!sdp.empty()) s.sdp_over_m = Summary::of(sdp);
  if (!qmc.empty()) s.qmc_ratio = Summary::of(qmc);
  return s;
}

SeparationReport assemble(std::size_t n, std::size_t alpha_n, std::size_t T, std::size_t trials,
                          std::uint64_t seed, std::vector<TrialRecord> records) {
  SeparationReport report;
  report.n = n;
  report.alpha_n = alpha_n;
  report.T = T;
  report.trials = trials;
  report.seed = seed;
  report.yes = side_stats(records, Truth::yes);
  report.no = side_stats(records, Truth::no);
  report.records = std::move(records);
  if (trials > 0 && report.yes.bipartite_rate != 1.0) {
    throw std::logic_error("a YES instance did not reduce to a fully cut bipartite graph");
  }
  return report;
}

TrialRecord trial_at(std::size_t k, std::size_t n, std::size_t alpha_n, std::size_t T, std::size_t trials,
                     std::uint64_t seed, const SeparationCompute& compute) {
  const Truth truth = k < trials ? Truth::yes : Truth::no;
  const std::size_t i = k % trials;
  return separation_trial(n, alpha_n, T, truth, derive_seed(seed, 2 * i + (truth == Truth::yes ? 1 : 0)),
                          compute);
}

}  // namespace

SeparationReport separation_experiment(std::size_t n, std::size_t alpha_n, std::size_t T,
                                       std::size_t trials, std::uint64_t seed, SeparationCompute compute) {
  check_request(n, alpha_n, T, compute);
  std::vector<TrialRecord> records(2 * trials);
  std::exception_ptr failure;
  const auto total = static_cast<std::int64_t>(records.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < total; ++k) {
    try {
      records[static_cast<std::size_t>(k)] =
          trial_at(static_cast<std::size_t>(k), n, alpha_n, T, trials, seed, compute);
    } catch (...) {
#pragma omp critical(qmcs_separation_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble(n, alpha_n, T, trials, seed, std::move(records));
}

namespace serial {

SeparationReport separation_experiment(std::size_t n, std::size_t alpha_n, std::size_t T,
                                       std::size_t trials, std::uint64_t seed, SeparationCompute compute) {
  check_request(n, alpha_n, T, compute);
  std::vector<TrialRecord> records;
  records.reserve(2 * trials);
  for (std::size_t k = 0; k < 2 * trials; ++k) records.push_back(trial_at(k, n, alpha_n, T, trials, seed, compute));
  return assemble(n, alpha_n, T, trials, seed, std::move(records));
}

}  // namespace serial

std::string separation_csv(const SeparationReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "truth,trial,m,bipartite,maxcut_ratio,sdp_over_m,qmc_ratio\n";
  auto opt = [&](const std::optional<double>& x) {
    if (x) out << *x;
  };
  for (std::size_t k = 0; k < report.records.size(); ++k) {
    const auto& r = report.records[k];
    out << to_string(r.truth) << ',' << k % std::max<std::size_t>(report.trials, 1) << ',' << r.m << ','
        << (r.bipartite ? 1 : 0) << ',';
    opt(r.maxcut_ratio);
    out << ',';
    opt(r.sdp_over_m);
    out << ',';
    opt(r.qmc_ratio);
    out << '\n';
  }
  return out.str();
}

}  // namespace qmcs
