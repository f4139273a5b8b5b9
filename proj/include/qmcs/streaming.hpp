#pragma once

#include "qmcs/graph.hpp"
#include "qmcs/rng.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qmcs {

struct SampledEdge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 0;
  Vertex endpoint = 0;  // the endpoint whose later edges are watched
};

/// State of one copy of the W estimator.
struct ReservoirState {
  double weight_seen = 0;
  std::optional<SampledEdge> candidate;
  double best_after = 0;  // heaviest later edge at the endpoint
  bool superseded = false;  // some later edge at the endpoint was strictly heavier
};

/// X in [0, 1]; 0 for an empty stream.
double finalize_sample(const ReservoirState& r);

/// Straight transcription of the estimator: one coin per edge decides
/// whether the edge becomes the new candidate.
class ReferenceReservoir {
 public:
  explicit ReferenceReservoir(Rng rng) : rng_(rng) {}
  void process_edge(const WeightedEdge& e);
  const ReservoirState& state() const noexcept { return state_; }

 private:
  Rng rng_;
  ReservoirState state_;
};

/// Pending thresholds, drained in increasing order against a nondecreasing
/// bound. Entries are bucketed by the top 19 bits of their IEEE
/// representation (exponent and seven mantissa bits); only the bucket the
/// bound currently falls in is kept as a heap.
class ThresholdQueue {
 public:
  using Entry = std::pair<double, std::uint32_t>;

  /// threshold must be at least every bound passed to pop_below so far.
  void push(double threshold, std::uint32_t id);
  std::size_t size() const noexcept { return size_; }

  /// Calls f(id) for every entry with threshold < bound. f may push.
  template <class F>
  void pop_below(double bound, F&& f);

 private:
  static std::uint64_t key_of(double x) noexcept;

  std::deque<std::vector<Entry>> buckets_;
  std::uint64_t base_ = 0;   // key of buckets_.front()
  std::uint64_t floor_ = 0;  // key of the largest bound so far
  bool front_is_heap_ = false;
  std::size_t size_ = 0;
};

/// K groups of B reservoirs. B = ceil(36/eps^2), K = 2 ceil(12 ln(1/delta)) + 1.
struct BankShape {
  std::size_t groups = 1;
  std::size_t per_group = 1;

  static BankShape for_accuracy(double epsilon, double delta);
  std::size_t reservoirs() const noexcept { return groups * per_group; }
};

/// All reservoirs of the amplified estimator.
///
/// Instead of flipping a coin per reservoir per edge, each reservoir draws
/// the cumulative weight at which its candidate is next replaced: after a
/// replacement at cumulative weight S, the candidate survives up to
/// cumulative weight S' with probability S/S', so the next replacement is the
/// first edge whose prefix sum exceeds S/U for U uniform in (0, 1]. Pending
/// replacements sit in a ThresholdQueue.
///
/// Reservoirs that took the same edge and endpoint at the same time see the
/// same later edges, so they share one cohort record holding the candidate
/// weight, best_after and superseded. An edge therefore touches only the
/// cohorts watching its endpoints.
class EstimatorBank {
 public:
  /// Stored words per reservoir: slot (1: cohort id and draw counter as
  /// 32-bit fields) and pending threshold (2); plus, since live cohorts never
  /// outnumber reservoirs, one cohort (5: endpoints and watched vertex,
  /// weight, best_after, count and flag) with its watch-list entry (1) and at
  /// most one watch-list header in the vertex map (5).
  static constexpr std::size_t kWordsPerReservoir = 14;
  /// m (numerator and denominator), running weight, edge counter, seed,
  /// shape (2), unweighted flag.
  static constexpr std::size_t kFixedWords = 8;

  EstimatorBank(BankShape shape, std::uint64_t seed);

  /// Throws std::invalid_argument for nonpositive weights or self-loops.
  void process_edge(const WeightedEdge& e);

  const BankShape& shape() const noexcept { return shape_; }
  const Weight& total_weight() const noexcept { return m_; }
  std::uint64_t edges_seen() const noexcept { return edges_; }
  bool unweighted() const noexcept { return unweighted_; }

  ReservoirState reservoir(std::size_t i) const;
  double sample(std::size_t i) const;

  /// Mean X per group.
  std::vector<double> group_means() const;
  /// Median over groups of 2m * mean X, clamped to [0, 2m].
  double estimate_W() const;

  std::size_t words_used() const noexcept {
    return kWordsPerReservoir * shape_.reservoirs() + kFixedWords;
  }
  /// Live cohorts; never more than the number of reservoirs.
  std::size_t cohorts() const noexcept { return cohorts_.size() - free_.size(); }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  struct Slot {
    std::uint32_t cohort = kNone;
    std::uint32_t draws = 0;
  };
  struct Cohort {
    Vertex u = 0;
    Vertex v = 0;
    Vertex endpoint = 0;
    std::uint32_t members = 0;
    double cand_w = 0;
    double best_after = 0;
    bool superseded = false;
  };

  std::uint32_t open_cohort(const WeightedEdge& e, Vertex endpoint, double w);
  void replace(std::uint32_t i, double w);

  BankShape shape_;
  std::uint64_t seed_;
  std::vector<Slot> slots_;
  ThresholdQueue pending_;
  std::vector<Cohort> cohorts_;
  std::vector<std::uint32_t> free_;
  std::unordered_map<Vertex, std::vector<std::uint32_t>> watchers_;
  std::uint32_t current_[2] = {kNone, kNone};  // cohorts of the edge being processed
  const WeightedEdge* edge_ = nullptr;
  Weight m_ = 0;
  double seen_ = 0;
  std::uint64_t edges_ = 0;
  bool unweighted_ = true;
};

inline constexpr std::size_t kMaxOracleEdges = 16;

/// Exact E[X] over every (edge, endpoint) outcome. Throws SizeError beyond
/// kMaxOracleEdges edges.
Weight expectation_oracle(const EdgeStream& stream);

/// Throws std::invalid_argument unless epsilon, delta are in (0, 1).
double estimate_W(const EdgeStream& stream, double epsilon, double delta, std::uint64_t seed);

enum class WeightMode { unweighted, weighted };

const char* to_string(WeightMode mode) noexcept;

struct QmcEstimate {
  double value = 0;
  Weight m = 0;
  double W_hat = 0;
  double epsilon = 0;
  double delta = 0;
  WeightMode mode = WeightMode::unweighted;
  double guaranteed_ratio = 0;  // 2 + eps or 5/2 + eps
  std::size_t words_used = 0;
  std::uint64_t edges = 0;
};

/// One-pass Quantum Max-Cut estimate. W is estimated to eps/4 * m and the
/// reported value m/2 + (W_hat + eps m / 4)/4 never falls below the optimum
/// when that estimate succeeds.
class QmcStreamEstimator {
 public:
  QmcStreamEstimator(double epsilon, double delta, std::uint64_t seed);

  void process_edge(const WeightedEdge& e) { bank_.process_edge(e); }
  QmcEstimate finish() const;
  const EstimatorBank& bank() const noexcept { return bank_; }

  double internal_epsilon() const noexcept { return epsilon_ / 4; }

 private:
  double epsilon_;
  double delta_;
  EstimatorBank bank_;
};

QmcEstimate estimate_qmc(const EdgeStream& stream, double epsilon, double delta, std::uint64_t seed);

// ---------------------------------------------------------------------------

inline std::uint64_t ThresholdQueue::key_of(double x) noexcept {
  return std::bit_cast<std::uint64_t>(x) >> 45;
}

template <class F>
void ThresholdQueue::pop_below(double bound, F&& f) {
  const std::uint64_t kb = key_of(bound);
  floor_ = std::max(floor_, kb);
  // Whole buckets below the bound's bucket.
  while (!buckets_.empty() && base_ < kb) {
    std::vector<Entry> drained = std::move(buckets_.front());
    buckets_.pop_front();
    ++base_;
    front_is_heap_ = false;
    size_ -= drained.size();
    for (const auto& entry : drained) f(entry.second);
  }
  if (buckets_.empty() || base_ != kb) return;
  auto& front = buckets_.front();
  if (!front_is_heap_) {
    std::make_heap(front.begin(), front.end(), std::greater<>());
    front_is_heap_ = true;
  }
  while (!buckets_.front().empty() && buckets_.front().front().first < bound) {
    auto& heap = buckets_.front();
    std::pop_heap(heap.begin(), heap.end(), std::greater<>());
    const std::uint32_t id = heap.back().second;
    heap.pop_back();
    --size_;
    f(id);
  }
}

}  // namespace qmcs
