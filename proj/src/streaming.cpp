#include "qmcs/streaming.hpp"
#include "qmcs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qmcs {
namespace {

void check_unit_interval(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
}

void check_edge(const WeightedEdge& e) {
  if (e.w <= 0) throw std::invalid_argument("edge weight must be positive");
  if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
}

}  // namespace

double finalize_sample(const ReservoirState& r) {
  if (!r.candidate || r.superseded) return 0.0;
  return 1.0 - r.best_after / r.candidate->w;
}

void ReferenceReservoir::process_edge(const WeightedEdge& e) {
  check_edge(e);
  const double w = to_double(e.w);
  state_.weight_seen += w;
  if (rng_.uniform() * state_.weight_seen < w) {
    state_.candidate = SampledEdge{e.u, e.v, w, rng_.coin() ? e.v : e.u};
    state_.best_after = 0;
    state_.superseded = false;
  } else if (state_.candidate && (e.u == state_.candidate->endpoint || e.v == state_.candidate->endpoint)) {
    state_.best_after = std::max(state_.best_after, w);
    if (w > state_.candidate->w) state_.superseded = true;
  }
}

BankShape BankShape::for_accuracy(double epsilon, double delta) {
  check_unit_interval(epsilon, "epsilon");
  check_unit_interval(delta, "delta");
  BankShape s;
  s.per_group = static_cast<std::size_t>(std::ceil(36.0 / (epsilon * epsilon) - 1e-9));
  s.groups = 2 * static_cast<std::size_t>(std::ceil(12.0 * std::log(1.0 / delta) - 1e-9)) + 1;
  return s;
}

// ---------------------------------------------------------------------------

void ThresholdQueue::push(double threshold, std::uint32_t id) {
  const std::uint64_t key = key_of(threshold);
  if (buckets_.empty()) {
    base_ = key;
    front_is_heap_ = false;
  }
  if (key < floor_) throw std::logic_error("threshold below an already drained bucket");
  if (key < base_) {
    buckets_.insert(buckets_.begin(), base_ - key, std::vector<Entry>{});
    base_ = key;
    front_is_heap_ = false;
  }
  const std::size_t index = key - base_;
  if (index >= buckets_.size()) buckets_.resize(index + 1);
  auto& bucket = buckets_[index];
  bucket.emplace_back(threshold, id);
  if (index == 0 && front_is_heap_) std::push_heap(bucket.begin(), bucket.end(), std::greater<>());
  ++size_;
}

// ---------------------------------------------------------------------------

EstimatorBank::EstimatorBank(BankShape shape, std::uint64_t seed)
    : shape_(shape), seed_(seed), slots_(shape.reservoirs()) {
  if (shape.reservoirs() == 0) throw std::invalid_argument("estimator bank needs at least one reservoir");
  if (shape.reservoirs() >= kNone) throw std::invalid_argument("too many reservoirs");
}

std::uint32_t EstimatorBank::open_cohort(const WeightedEdge& e, Vertex endpoint, double w) {
  std::uint32_t id;
  if (free_.empty()) {
    id = static_cast<std::uint32_t>(cohorts_.size());
    cohorts_.emplace_back();
  } else {
    id = free_.back();
    free_.pop_back();
  }
  cohorts_[id] = Cohort{e.u, e.v, endpoint, 0, w, 0.0, false};
  watchers_[endpoint].push_back(id);
  return id;
}

void EstimatorBank::replace(std::uint32_t i, double w) {
  Slot& s = slots_[i];
  if (s.cohort != kNone) {
    // Empty cohorts are recycled when their watch list is next scanned.
    --cohorts_[s.cohort].members;
  }
  // One draw: the top bit picks the endpoint, the low 53 bits give U.
  const std::uint64_t bits = counter_draw(seed_, i, s.draws++);
  const int side = static_cast<int>(bits >> 63);
  if (current_[side] == kNone) current_[side] = open_cohort(*edge_, side ? edge_->v : edge_->u, w);
  s.cohort = current_[side];
  ++cohorts_[s.cohort].members;
  const double u = static_cast<double>((bits & ((std::uint64_t{1} << 53) - 1)) + 1) * 0x1.0p-53;  // (0, 1]
  pending_.push(seen_ / u, i);
}

void EstimatorBank::process_edge(const WeightedEdge& e) {
  check_edge(e);
  const double w = to_double(e.w);
  m_ += e.w;
  seen_ += w;
  ++edges_;
  if (e.w != 1) unweighted_ = false;

  for (const Vertex x : {e.u, e.v}) {
    const auto it = watchers_.find(x);
    if (it == watchers_.end()) continue;
    auto& list = it->second;
    for (std::size_t k = 0; k < list.size();) {
      const std::uint32_t id = list[k];
      Cohort& c = cohorts_[id];
      if (c.members == 0) {
        free_.push_back(id);
        list[k] = list.back();
        list.pop_back();
        continue;
      }
      if (w > c.best_after) c.best_after = w;
      if (w > c.cand_w) c.superseded = true;
      ++k;
    }
    if (list.empty()) watchers_.erase(it);
  }

  edge_ = &e;
  current_[0] = current_[1] = kNone;
  if (edges_ == 1) {
    for (std::uint32_t i = 0; i < slots_.size(); ++i) replace(i, w);
  } else {
    pending_.pop_below(seen_, [&](std::uint32_t i) { replace(i, w); });
  }
  edge_ = nullptr;
}

ReservoirState EstimatorBank::reservoir(std::size_t i) const {
  const Slot& s = slots_.at(i);
  ReservoirState r;
  r.weight_seen = seen_;
  if (s.cohort != kNone) {
    const Cohort& c = cohorts_[s.cohort];
    r.candidate = SampledEdge{c.u, c.v, c.cand_w, c.endpoint};
    r.best_after = c.best_after;
    r.superseded = c.superseded;
  }
  return r;
}

double EstimatorBank::sample(std::size_t i) const { return finalize_sample(reservoir(i)); }

std::vector<double> EstimatorBank::group_means() const {
  std::vector<double> means(shape_.groups, 0.0);
  for (std::size_t g = 0; g < shape_.groups; ++g) {
    double sum = 0;
    for (std::size_t b = 0; b < shape_.per_group; ++b) sum += sample(g * shape_.per_group + b);
    means[g] = sum / static_cast<double>(shape_.per_group);
  }
  return means;
}

double EstimatorBank::estimate_W() const {
  const double two_m = 2.0 * to_double(m_);
  auto means = group_means();
  auto mid = means.begin() + static_cast<std::ptrdiff_t>(means.size() / 2);
  std::nth_element(means.begin(), mid, means.end());
  return std::clamp(two_m * *mid, 0.0, two_m);
}

// ---------------------------------------------------------------------------

Weight expectation_oracle(const EdgeStream& stream) {
  const auto& edges = stream.edges;
  if (edges.size() > kMaxOracleEdges) {
    throw SizeError("expectation oracle supports at most " + std::to_string(kMaxOracleEdges) + " edges");
  }
  Weight m = 0;
  for (const auto& e : edges) m += e.w;
  if (m == 0) return 0;
  Weight expectation = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (const Vertex c : {edges[i].u, edges[i].v}) {
      Weight later = 0;
      bool superseded = false;
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        if (edges[j].u != c && edges[j].v != c) continue;
        if (edges[j].w > later) later = edges[j].w;
        if (edges[j].w > edges[i].w) superseded = true;
      }
      const Weight x = superseded ? Weight(0) : Weight(1 - later / edges[i].w);
      expectation += edges[i].w / m / 2 * x;
    }
  }
  return expectation;
}

double estimate_W(const EdgeStream& stream, double epsilon, double delta, std::uint64_t seed) {
  EstimatorBank bank(BankShape::for_accuracy(epsilon, delta), seed);
  for (const auto& e : stream.edges) bank.process_edge(e);
  return bank.estimate_W();
}

const char* to_string(WeightMode mode) noexcept {
  return mode == WeightMode::unweighted ? "unweighted" : "weighted";
}

QmcStreamEstimator::QmcStreamEstimator(double epsilon, double delta, std::uint64_t seed)
    : epsilon_(epsilon),
      delta_(delta),
      bank_(BankShape::for_accuracy(epsilon / 4, delta), seed) {
  check_unit_interval(epsilon, "epsilon");
}

QmcEstimate QmcStreamEstimator::finish() const {
  QmcEstimate out;
  out.m = bank_.total_weight();
  out.epsilon = epsilon_;
  out.delta = delta_;
  out.mode = bank_.unweighted() ? WeightMode::unweighted : WeightMode::weighted;
  out.guaranteed_ratio = (out.mode == WeightMode::unweighted ? 2.0 : 2.5) + epsilon_;
  out.words_used = bank_.words_used();
  out.edges = bank_.edges_seen();
  const double m = to_double(out.m);
  out.W_hat = bank_.estimate_W();
  const double shifted = m / 2 + (out.W_hat + internal_epsilon() * m) / 4;
  out.value = std::clamp(shifted, m / 2, m + epsilon_ * m / 4);
  return out;
}

QmcEstimate estimate_qmc(const EdgeStream& stream, double epsilon, double delta, std::uint64_t seed) {
  QmcStreamEstimator estimator(epsilon, delta, seed);
  for (const auto& e : stream.edges) estimator.process_edge(e);
  return estimator.finish();
}

}  // namespace qmcs
