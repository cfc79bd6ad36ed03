#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mlat/network.hpp"
#include "mlat/ranging.hpp"

namespace mlat {

struct SweepConfig {
  double e_start = 0.0;
  double e_step = 0.001;
  int steps = 200;  // increments past e_start; the grid has steps+1 points
  ErrorModelKind model = ErrorModelKind::Random;
  double max_range = 1.0;  // Constant model parameter
  int max_retries = 50;
  std::uint64_t seed = 42;
  std::vector<Method> methods = {Method::M1, Method::M2, Method::M3};
  int threads = 1;
  bool strict_pairs = false;
};

void validate(const SweepConfig& cfg);  // throws std::invalid_argument

struct NodeResult {
  int node = -1;
  Method method = Method::M1;
  std::optional<Point2> estimated;
  std::optional<double> error_distance;
  int attempts = 0;  // 0 when the node has < 3 anchors
};

// Substream for one (e grid index, node) cell. Methods share it on purpose:
// every method scores the same distance draws.
std::uint64_t sweep_stream_seed(std::uint64_t seed, int e_index, int node);

// Generic attempt loop with an injectable estimator; estimate(attempt, k,
// true_dist) must return the estimated distance of anchor k on that attempt
// (attempts are 1-based). Used directly by tests.
template <class EstimateFn>
NodeResult localize_node_with(std::span<const AnchorObservation> anchors, Point2 true_pos,
                              Method method, int max_retries, const ClusterOptions& opts,
                              EstimateFn&& estimate) {
  NodeResult r;
  r.method = method;
  if (anchors.size() < 3) return r;
  std::vector<Circle> circles(anchors.size());
  for (int attempt = 1; attempt <= max_retries + 1; ++attempt) {
    for (std::size_t k = 0; k < anchors.size(); ++k)
      circles[k] = {anchors[k].anchor, estimate(attempt, static_cast<int>(k), anchors[k].distance)};
    r.attempts = attempt;
    const Cluster cluster = run_method(method, circles, opts);
    if (auto est = estimate_position(cluster)) {
      r.estimated = *est;
      r.error_distance = distance(*est, true_pos);
      break;
    }
  }
  return r;
}

// Concrete estimator: per attempt a fresh Rng seeded from
// derive_seed(stream_seed, attempt), consumed in anchor order.
NodeResult localize_node(std::span<const AnchorObservation> anchors, Point2 true_pos,
                         const ErrorModel& model, Method method, std::uint64_t stream_seed,
                         int max_retries, const ClusterOptions& opts = {});

struct SweepRecord {
  double e = 0.0;
  Method method = Method::M1;
  std::optional<double> total_error;  // empty when nothing was localized
  std::optional<double> total_error_pct_range;
  int localized_count = 0;
  int node_count = 0;
};

struct NodeDetail {
  double e = 0.0;
  Method method = Method::M1;
  int node = 0;
  int attempts = 0;
  std::optional<double> error_distance;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // sorted by (e, method)
  std::vector<NodeDetail> details;   // (e, method, node) order
};

// Full protocol: for every grid e and method, localize every node with
// up to max_retries redraws, then aggregate. Deterministic for a given
// seed, including under cfg.threads > 1.
SweepResult run_sweep(const NetworkTopology& topo, const SweepConfig& cfg);

void emit_results(std::span<const SweepRecord> records, std::ostream& out);
void emit_plot_data(std::span<const SweepRecord> records, Method m, std::ostream& out);
void emit_node_details(std::span<const NodeDetail> details, std::ostream& out);

// Everything localize-one needs to dump a single solve.
struct LocalizeDetail {
  struct PointRow {
    Point2 p;
    int pair_i = 0;
    int pair_j = 0;
    bool chosen = false;
  };
  std::vector<Circle> circles;  // anchor circles of the reported attempt
  std::vector<PointRow> points;
  std::optional<Point2> estimate;
  Point2 true_position;
  int attempts = 0;
};

// Throws TooFewAnchors when the node has fewer than 3 neighbours. Uses the
// e-index-0 substream, so it reproduces a sweep's first-row draws when the
// seeds and e match.
LocalizeDetail localize_detail(const NetworkTopology& topo, int node, const ErrorModel& model,
                               Method method, std::uint64_t seed, int max_retries,
                               const ClusterOptions& opts = {});

void write_localize_detail(const LocalizeDetail& d, std::ostream& out);

}  // namespace mlat
