#include "qmcs/dihp.hpp"
#include "qmcs/exact.hpp"
#include "qmcs/fourier.hpp"
#include "qmcs/relaxation.hpp"
#include "qmcs/streaming.hpp"
#include "qmcs/tolerance.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
using namespace qmcs;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInfeasible = 2;

struct RunConfig {
  std::string input = "-";
  double eps = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t n = 32;
  std::size_t alpha_n = 4;
  std::size_t t_players = 8;
  std::string truth = "YES";
  std::string mode = "none";
  std::string format = "json";
  std::string compute = "maxcut";
  std::size_t restarts = 8;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// stdin for "-", else the named file.
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw InputError("cannot open input '" + path + "'");
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

json weight_json(const Weight& w) { return json{{"value", to_double(w)}, {"exact", format_weight(w)}}; }

json header(const std::string& command, const RunConfig& cfg) {
  return json{{"schema", 1}, {"command", command}, {"seed", cfg.seed}};
}

void check_unit(double x, const char* name) {
  if (!(x > 0 && x < 1)) throw InputError(std::string("--") + name + " must lie in (0, 1)");
}

EdgeStream read_graph(const RunConfig& cfg) {
  Input in(cfg.input);
  return parse_edge_list(in.stream());
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  check_unit(cfg.eps, "eps");
  check_unit(cfg.delta, "delta");
  Input in(cfg.input);
  EdgeLineReader reader(in.stream());
  QmcStreamEstimator estimator(cfg.eps, cfg.delta, cfg.seed);
  while (auto e = reader.next()) estimator.process_edge(*e);
  const auto est = estimator.finish();
  const auto& shape = estimator.bank().shape();
  json j = header("estimate", cfg);
  j["epsilon"] = est.epsilon;
  j["delta"] = est.delta;
  j["n"] = reader.vertex_count();
  j["edges"] = est.edges;
  j["m"] = weight_json(est.m);
  j["W_hat"] = est.W_hat;
  j["value"] = est.value;
  j["mode"] = to_string(est.mode);
  j["guaranteed_ratio"] = est.guaranteed_ratio;
  j["groups"] = shape.groups;
  j["per_group"] = shape.per_group;
  j["words_used"] = est.words_used;
  j["tolerance"] = {{"additive_W", estimator.internal_epsilon()}, {"failure_probability", est.delta}};
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_exact(const RunConfig& cfg, std::ostream& out) {
  const auto stream = read_graph(cfg);
  const auto g = WeightedGraph::from_stream(stream);
  json j = header("exact", cfg);
  j["n"] = g.vertex_count();
  j["edges"] = g.edge_count();
  const auto cut = g.vertex_count() <= kMaxBruteForceVertices ? max_cut_bruteforce(g) : max_cut_exact(g);
  j["maxcut"] = weight_json(cut.value);
  j["maxcut_side"] = cut.side;
  const LanczosOptions lanczos;
  const auto q = g.edge_count() == 0 ? QmcExactResult{} : qmc_exact(g, lanczos);
  j["qmc"] = q.value;
  j["qmc_residual"] = q.residual;
  const auto b = qmc_bounds(g);
  j["m"] = weight_json(b.m);
  j["W"] = weight_json(b.W);
  j["upper"] = weight_json(b.upper);
  j["lower_weighted"] = weight_json(b.lower_weighted);
  j["lower_unweighted"] = b.lower_unweighted ? weight_json(*b.lower_unweighted) : json(nullptr);
  // Shorthand matching the bound that applies to this graph.
  j["lower"] = weight_json(b.lower_unweighted ? *b.lower_unweighted : b.lower_weighted);
  const auto c = constructive_energies(g);
  j["constructive"] = {
      {"matching_value", weight_json(c.matching_value)},
      {"forest_cut_value", weight_json(c.forest_cut_value)},
      {"dfs_level_value", c.dfs_level_value ? weight_json(*c.dfs_level_value) : json(nullptr)},
      {"best_lower_bound", weight_json(best_lower_bound(g, c))},
  };
  j["tolerance"] = {{"qmc_residual", lanczos.tol * std::max(1.0, to_double(b.m))}, {"maxcut", 0}, {"bounds", 0}};
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_relax(const RunConfig& cfg, std::ostream& out) {
  const auto g = WeightedGraph::from_stream(read_graph(cfg));
  RelaxationOptions opts;
  opts.seed = cfg.seed;
  opts.restarts = cfg.restarts;
  const auto r = solve_vector_program(g, opts);
  json j = header("relax", cfg);
  j["n"] = g.vertex_count();
  j["edges"] = g.edge_count();
  j["rank"] = r.assignment.rank;
  j["best_value"] = r.best_value;
  j["converged"] = r.converged;
  j["gradient_norm"] = r.gradient_norm;
  j["restarts_used"] = r.restarts_used;
  j["best_after_restart"] = r.best_after_restart;
  j["seeded_cut_value"] = r.seeded_cut_value ? json(*r.seeded_cut_value) : json(nullptr);
  j["tolerance"] = {{"gradient", opts.tol}, {"unit_norm", tolerance::kPsd}};
  out << j.dump(2) << '\n';
  return kOk;
}

Truth parse_truth(const std::string& s) {
  if (s == "YES" || s == "yes") return Truth::yes;
  if (s == "NO" || s == "no") return Truth::no;
  throw InputError("--truth must be YES or NO");
}

int cmd_dihp_gen(const RunConfig& cfg, std::ostream& out) {
  const auto inst = sample_instance(cfg.n, cfg.alpha_n, cfg.t_players, parse_truth(cfg.truth), cfg.seed);
  out << serialize_instance(inst);
  return kOk;
}

SeparationCompute parse_compute(const std::string& s) {
  SeparationCompute c{false, false, false};
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "maxcut") c.maxcut = true;
    else if (item == "sdp") c.sdp = true;
    else if (item == "qmc") c.qmc_exact = true;
    else if (!item.empty()) throw InputError("--compute takes a comma list of maxcut, sdp, qmc; got '" + item + "'");
  }
  return c;
}

json summary_json(const std::optional<Summary>& s) {
  if (!s) return nullptr;
  return json{{"count", s->count}, {"mean", s->mean}, {"min", s->min}, {"max", s->max}, {"std_error", s->std_error}};
}

json side_json(const SideStats& s) {
  return json{{"bipartite_rate", s.bipartite_rate},
              {"m", summary_json(s.m)},
              {"maxcut_ratio", summary_json(s.maxcut_ratio)},
              {"sdp_over_m", summary_json(s.sdp_over_m)},
              {"qmc_ratio", summary_json(s.qmc_ratio)}};
}

/// Decision accuracy of a streaming algorithm used as a protocol.
json protocol_json(const RunConfig& cfg) {
  std::size_t correct[2] = {0, 0};
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    for (const Truth truth : {Truth::no, Truth::yes}) {
      const std::size_t t = truth == Truth::yes ? 1 : 0;
      const auto inst = sample_instance(cfg.n, cfg.alpha_n, cfg.t_players, truth, derive_seed(cfg.seed, 2 * i + t));
      std::unique_ptr<StreamingAlgorithm> alg;
      ProtocolMode mode = ProtocolMode::qmc;
      if (cfg.mode == "maxcut") {
        alg = exact_maxcut_algorithm(cfg.n);
        mode = ProtocolMode::maxcut;
      } else if (cfg.mode == "qmc") {
        alg = exact_qmc_algorithm(cfg.n);
      } else {
        alg = streaming_qmc_algorithm(cfg.eps, cfg.delta, derive_seed(cfg.seed, 1000003 + 2 * i + t));
      }
      if (run_protocol(inst, *alg, mode, cfg.eps).decision == truth) ++correct[t];
    }
  }
  const double trials = static_cast<double>(std::max<std::size_t>(cfg.trials, 1));
  return json{{"mode", cfg.mode},
              {"epsilon", cfg.eps},
              {"yes_accuracy", static_cast<double>(correct[1]) / trials},
              {"no_accuracy", static_cast<double>(correct[0]) / trials},
              {"success", static_cast<double>(correct[0] + correct[1]) / (2 * trials)}};
}

int cmd_dihp_exp(const RunConfig& cfg, std::ostream& out) {
  if (cfg.format != "json" && cfg.format != "csv") throw InputError("--format must be json or csv");
  if (cfg.mode != "none" && cfg.mode != "maxcut" && cfg.mode != "qmc" && cfg.mode != "stream-qmc") {
    throw InputError("--mode must be none, maxcut, qmc or stream-qmc");
  }
  if (cfg.mode != "none") check_unit(cfg.eps, "eps");
  if (cfg.mode == "stream-qmc") check_unit(cfg.delta, "delta");
  if (cfg.mode == "qmc" && cfg.n > kMaxQmcQubits) throw SizeError("--mode qmc needs n <= 14");
  const auto compute = parse_compute(cfg.compute);
  if (compute.qmc_exact && cfg.n > kMaxQmcQubits) throw SizeError("--compute qmc needs n <= 14");
  const auto report = separation_experiment(cfg.n, cfg.alpha_n, cfg.t_players, cfg.trials, cfg.seed, compute);
  if (cfg.format == "csv") {
    out << separation_csv(report);
    return kOk;
  }
  json j = header("dihp-exp", cfg);
  j["n"] = report.n;
  j["alpha_n"] = report.alpha_n;
  j["T"] = report.T;
  j["trials"] = report.trials;
  j["yes"] = side_json(report.yes);
  j["no"] = side_json(report.no);
  const auto sep = report.maxcut_separation_in_se();
  j["maxcut_separation_in_se"] = sep && std::isfinite(*sep) ? json(*sep) : (sep ? json("inf") : json(nullptr));
  if (cfg.mode != "none") j["protocol"] = protocol_json(cfg);
  j["tolerance"] = {{"ratio", 0}, {"relaxation_gradient", RelaxationOptions{}.tol}, {"qmc_residual", LanczosOptions{}.tol}};
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_fourier(const RunConfig& cfg, std::ostream& out) {
  const auto report = run_fourier_verification(cfg.seed);
  json j = header("fourier-verify", cfg);
  json lemmas = json::array();
  for (const auto& l : report.lemmas) {
    lemmas.push_back({{"name", l.name},
                      {"checks", l.checks},
                      {"violations", l.violations},
                      {"max_violation", l.max_violation},
                      {"tolerance", l.tolerance}});
  }
  j["lemmas"] = lemmas;
  j["violations"] = report.total_violations();
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_wexact(const RunConfig& cfg, std::ostream& out) {
  const auto g = WeightedGraph::from_stream(read_graph(cfg));
  json j = header("wexact", cfg);
  j["n"] = g.vertex_count();
  j["edges"] = g.edge_count();
  j["m"] = weight_json(total_weight(g));
  j["W"] = weight_json(max_incident_sum(g));
  j["unweighted"] = g.is_unweighted();
  j["tolerance"] = {{"exact", 0}};
  out << j.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming Quantum Max-Cut toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto input = [&](CLI::App* c) { c->add_option("--input", cfg.input, "Edge list path, or - for standard input"); };
  auto seed = [&](CLI::App* c) { c->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str(); };
  auto accuracy = [&](CLI::App* c) {
    c->add_option("--eps", cfg.eps, "Accuracy epsilon in (0, 1)")->capture_default_str();
    c->add_option("--delta", cfg.delta, "Failure probability in (0, 1)")->capture_default_str();
  };
  auto dihp_shape = [&](CLI::App* c) {
    c->add_option("--n", cfg.n, "Vertices")->capture_default_str();
    c->add_option("--alpha-n", cfg.alpha_n, "Edges per matching")->capture_default_str();
    c->add_option("--t-players", cfg.t_players, "Players")->capture_default_str();
  };

  auto* estimate = app.add_subcommand("estimate", "One-pass QMC estimate of an edge stream");
  input(estimate);
  accuracy(estimate);
  seed(estimate);

  auto* exact = app.add_subcommand("exact", "Exact max-cut, exact QMC, bounds and constructive energies");
  input(exact);

  auto* relax = app.add_subcommand("relax", "Vector program relaxation of max-cut");
  input(relax);
  seed(relax);
  relax->add_option("--trials", cfg.restarts, "Restarts")->capture_default_str();

  auto* gen = app.add_subcommand("dihp-gen", "Sample a hidden partition instance");
  dihp_shape(gen);
  seed(gen);
  gen->add_option("--truth", cfg.truth, "YES or NO")->capture_default_str();

  auto* exp = app.add_subcommand("dihp-exp", "YES/NO separation experiment");
  dihp_shape(exp);
  seed(exp);
  accuracy(exp);
  exp->add_option("--trials", cfg.trials, "Trials per truth value")->capture_default_str();
  exp->add_option("--compute", cfg.compute, "Comma list of maxcut, sdp, qmc")->capture_default_str();
  exp->add_option("--mode", cfg.mode, "Protocol harness: none, maxcut, qmc, stream-qmc")->capture_default_str();
  exp->add_option("--format", cfg.format, "json or csv")->capture_default_str();

  auto* fourier = app.add_subcommand("fourier-verify", "Numerical checks of the Fourier lemmas");
  seed(fourier);

  auto* wexact = app.add_subcommand("wexact", "Exact m and W of an edge list");
  input(wexact);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  std::ostringstream out;
  int code = kOk;
  try {
    if (estimate->parsed()) code = cmd_estimate(cfg, out);
    else if (exact->parsed()) code = cmd_exact(cfg, out);
    else if (relax->parsed()) code = cmd_relax(cfg, out);
    else if (gen->parsed()) code = cmd_dihp_gen(cfg, out);
    else if (exp->parsed()) code = cmd_dihp_exp(cfg, out);
    else if (fourier->parsed()) code = cmd_fourier(cfg, out);
    else if (wexact->parsed()) code = cmd_wexact(cfg, out);
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  std::cout << out.str();
  return code;
}
