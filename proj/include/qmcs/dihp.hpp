#pragma once

#include "qmcs/exact.hpp"
#include "qmcs/graph.hpp"
#include "qmcs/streaming.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmcs {

enum class Truth { no, yes };

const char* to_string(Truth t) noexcept;

/// Implicit hidden partition instance: T players, each holding an
/// alpha_n-edge matching on [n] with one bit per edge.
struct DihpInstance {
  std::size_t n = 0;
  std::size_t alpha_n = 0;
  std::size_t T = 0;
  std::vector<std::vector<std::pair<Vertex, Vertex>>> matchings;  // u < v
  std::vector<std::vector<std::uint8_t>> labels;
  Truth truth = Truth::no;
  std::optional<std::vector<std::uint8_t>> hidden_partition;  // YES only

  /// Throws std::invalid_argument when a structural invariant fails.
  void validate() const;
};

/// Each matching is drawn edge by edge, uniformly over pairs of still
/// unmatched vertices. Throws std::invalid_argument unless 2 alpha_n <= n
/// and T >= 1.
DihpInstance sample_instance(std::size_t n, std::size_t alpha_n, std::size_t T, Truth truth,
                             std::uint64_t seed);

/// Label-1 edges in player order, skipping pairs that occur in an earlier
/// player's matching. Unit weights.
EdgeStream reduce_to_stream(const DihpInstance& inst);

/// "dihp n alpha_n T YES|NO", then per player a line "u:v u:v ..." and a line
/// of label bits ("0110").
std::string serialize_instance(const DihpInstance& inst);

/// Throws ParseError. For YES instances the hidden partition is rebuilt from
/// the labels (a consistent one always exists; inconsistency is an error).
DihpInstance parse_instance(std::string_view text);

// ---------------------------------------------------------------------------
// Streaming algorithms as one-way protocols
// ---------------------------------------------------------------------------

class StreamingAlgorithm {
 public:
  virtual ~StreamingAlgorithm() = default;
  virtual void process_edge(const WeightedEdge& e) = 0;
  virtual double report() = 0;
  /// Words of state the algorithm would hand to the next player now.
  virtual std::size_t state_words() const = 0;
  virtual std::string name() const = 0;
};

/// Stores the stream (3 words per edge) and returns the optimal cut.
std::unique_ptr<StreamingAlgorithm> exact_maxcut_algorithm(std::size_t n);
/// Stores the stream and returns the exact QMC value.
std::unique_ptr<StreamingAlgorithm> exact_qmc_algorithm(std::size_t n);
/// The one-pass estimator.
std::unique_ptr<StreamingAlgorithm> streaming_qmc_algorithm(double epsilon, double delta,
                                                            std::uint64_t seed);

enum class ProtocolMode { maxcut, qmc };

const char* to_string(ProtocolMode mode) noexcept;

struct ProtocolTranscript {
  Truth decision = Truth::no;
  std::size_t m = 0;
  double reported = 0;
  double threshold = 0;
  std::size_t counter_bits = 0;  // 2 ceil(log2 n)
  /// Words passed at each handoff, player t -> t+1, plus the last player's
  /// final state: algorithm state plus the edge counter.
  std::vector<std::size_t> handoff_words;
};

/// Feeds reduce_to_stream(inst) player by player; YES iff the reported value
/// is at least m/(2-eps) (max-cut) or m/(4-eps) (QMC).
ProtocolTranscript run_protocol(const DihpInstance& inst, StreamingAlgorithm& algorithm,
                                ProtocolMode mode, double epsilon);

// ---------------------------------------------------------------------------
// Separation experiments
// ---------------------------------------------------------------------------

struct SeparationCompute {
  bool maxcut = true;
  bool sdp = false;
  bool qmc_exact = false;
};

struct Summary {
  std::size_t count = 0;
  double mean = 0;
  double min = 0;
  double max = 0;
  double std_error = 0;  // standard error of the mean

  static Summary of(const std::vector<double>& xs);
};

struct TrialRecord {
  Truth truth = Truth::no;
  std::size_t m = 0;
  bool bipartite = false;
  std::optional<double> maxcut_ratio;  // MC / m, 1 when m = 0
  std::optional<double> sdp_over_m;    // K_hat / m
  std::optional<double> qmc_ratio;     // QMC / m

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct SideStats {
  Summary m;
  double bipartite_rate = 0;
  std::optional<Summary> maxcut_ratio;
  std::optional<Summary> sdp_over_m;
  std::optional<Summary> qmc_ratio;
};

struct SeparationReport {
  std::size_t n = 0;
  std::size_t alpha_n = 0;
  std::size_t T = 0;
  std::size_t trials = 0;  // per truth value
  std::uint64_t seed = 0;
  SideStats yes;
  SideStats no;
  std::vector<TrialRecord> records;  // YES trials first

  /// (yes mean - no mean) / sqrt(se_yes^2 + se_no^2) for the max-cut ratio;
  /// infinite when both standard errors vanish and the means differ.
  std::optional<double> maxcut_separation_in_se() const;
};

/// Runs `trials` YES and `trials` NO instances. Throws std::invalid_argument
/// when qmc_exact is requested with n > kMaxQmcQubits, and std::logic_error
/// if a YES instance fails to reduce to a bipartite graph fully cut.
SeparationReport separation_experiment(std::size_t n, std::size_t alpha_n, std::size_t T,
                                       std::size_t trials, std::uint64_t seed,
                                       SeparationCompute compute = {});

namespace serial {

SeparationReport separation_experiment(std::size_t n, std::size_t alpha_n, std::size_t T,
                                       std::size_t trials, std::uint64_t seed,
                                       SeparationCompute compute = {});

}  // namespace serial

/// The statistics of one trial; trial i of truth t uses the substream
/// derive_seed(seed, 2 i + t).
TrialRecord separation_trial(std::size_t n, std::size_t alpha_n, std::size_t T, Truth truth,
                             std::uint64_t seed, const SeparationCompute& compute);

std::string separation_csv(const SeparationReport& report);

}  // namespace qmcs
