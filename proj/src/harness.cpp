#include "mlat/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mlat/errors.hpp"
#include "mlat/format.hpp"

namespace mlat {

void validate(const SweepConfig& cfg) {
  if (!(cfg.e_start >= 0.0 && std::isfinite(cfg.e_start)))
    throw std::invalid_argument("e_start must be >= 0");
  if (!(cfg.e_step > 0.0 && std::isfinite(cfg.e_step)))
    throw std::invalid_argument("e_step must be positive");
  if (cfg.steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (!(cfg.e_start + cfg.steps * cfg.e_step < 1.0))
    throw std::invalid_argument("e grid must stay below 1");
  if (cfg.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (cfg.methods.empty()) throw std::invalid_argument("methods must not be empty");
  if (cfg.model == ErrorModelKind::Constant && !(cfg.max_range > 0.0))
    throw std::invalid_argument("max_range must be positive");
}

std::uint64_t sweep_stream_seed(std::uint64_t seed, int e_index, int node) {
  return derive_seed(seed, static_cast<std::uint64_t>(e_index), static_cast<std::uint64_t>(node));
}

NodeResult localize_node(std::span<const AnchorObservation> anchors, Point2 true_pos,
                         const ErrorModel& model, Method method, std::uint64_t stream_seed,
                         int max_retries, const ClusterOptions& opts) {
  Rng g;
  int cur = 0;
  auto estimate = [&](int attempt, int /*k*/, double dist) {
    if (attempt != cur) {
      g.seed(derive_seed(stream_seed, static_cast<std::uint64_t>(attempt)));
      cur = attempt;
    }
    return apply_error(model, dist, g);
  };
  return localize_node_with(anchors, true_pos, method, max_retries, opts, estimate);
}

SweepResult run_sweep(const NetworkTopology& topo, const SweepConfig& cfg) {
  validate(cfg);
  std::vector<Method> methods = cfg.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  const int n = static_cast<int>(topo.positions.size());
  const int rows = cfg.steps + 1;
  const int m = static_cast<int>(methods.size());
  const ClusterOptions opts{cfg.strict_pairs};

  std::vector<std::vector<AnchorObservation>> anchors(n);
  for (int i = 0; i < n; ++i) anchors[i] = anchors_of(topo, i);

  struct Cell {
    double err_sum = 0.0;
    int localized = 0;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(rows) * m);
  std::vector<NodeDetail> details(static_cast<std::size_t>(rows) * m * n);

  // One grid row is a unit of work; every (method, node) cell inside it is
  // produced by the same thread, so the aggregation order never changes.
  auto process_row = [&](int ei) {
    ErrorModel model{cfg.model, cfg.e_start + ei * cfg.e_step, cfg.max_range};
    std::vector<Circle> circles;
    std::vector<char> done(m);
    for (int node = 0; node < n; ++node) {
      const auto& obs = anchors[node];
      const auto detail_at = [&](int mi) -> NodeDetail& {
        return details[(static_cast<std::size_t>(ei) * m + mi) * n + node];
      };
      if (static_cast<int>(obs.size()) < 3) {
        for (int mi = 0; mi < m; ++mi) detail_at(mi) = {model.e, methods[mi], node, 0, {}};
        continue;
      }
      const std::uint64_t stream = sweep_stream_seed(cfg.seed, ei, node);
      std::fill(done.begin(), done.end(), 0);
      int remaining = m;
      circles.resize(obs.size());
      std::vector<Point2> pts;
      for (int attempt = 1; attempt <= cfg.max_retries + 1 && remaining > 0; ++attempt) {
        Rng g(derive_seed(stream, static_cast<std::uint64_t>(attempt)));
        for (std::size_t k = 0; k < obs.size(); ++k)
          circles[k] = {obs[k].anchor, apply_error(model, obs[k].distance, g)};
        const PairScan scan = intersection_pairs(circles);
        for (int mi = 0; mi < m; ++mi) {
          if (done[mi]) continue;
          const auto sel = select_cluster(methods[mi], scan, circles, opts);
          if (sel.empty()) {
            if (attempt == cfg.max_retries + 1)
              detail_at(mi) = {model.e, methods[mi], node, attempt, {}};
            continue;
          }
          pts.clear();
          for (const SelectedPoint& s : sel)
            pts.push_back(scan.pairs[s.pair_index].points[s.point_index]);
          const Point2 est = centroid(pts);
          const double err = distance(est, topo.positions[node]);
          Cell& cell = cells[static_cast<std::size_t>(ei) * m + mi];
          cell.err_sum += err;
          cell.localized += 1;
          detail_at(mi) = {model.e, methods[mi], node, attempt, err};
          done[mi] = 1;
          --remaining;
        }
      }
    }
  };

  const int workers = std::min(cfg.threads, rows);
  if (workers <= 1) {
    for (int ei = 0; ei < rows; ++ei) process_row(ei);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (int ei = t; ei < rows; ei += workers) process_row(ei);
      });
    for (auto& th : pool) th.join();
  }

  SweepResult out;
  out.records.reserve(cells.size());
  for (int ei = 0; ei < rows; ++ei) {
    for (int mi = 0; mi < m; ++mi) {
      const Cell& cell = cells[static_cast<std::size_t>(ei) * m + mi];
      SweepRecord rec;
      rec.e = cfg.e_start + ei * cfg.e_step;
      rec.method = methods[mi];
      rec.localized_count = cell.localized;
      rec.node_count = n;
      if (cell.localized > 0) {
        rec.total_error = cell.err_sum / cell.localized;
        rec.total_error_pct_range = 100.0 * *rec.total_error / topo.config.radius;
      }
      out.records.push_back(rec);
    }
  }
  out.details = std::move(details);
  return out;
}

namespace {

void put_opt9(std::ostream& out, const std::optional<double>& v) {
  if (v)
    out << format_double9(*v);
  else
    out << "nan";
}

}  // namespace

void emit_results(std::span<const SweepRecord> records, std::ostream& out) {
  out << "e,method,total_error,total_error_pct_range,localized_count,node_count\n";
  for (const SweepRecord& r : records) {
    out << format_double9(r.e) << ',' << method_name(r.method) << ',';
    put_opt9(out, r.total_error);
    out << ',';
    put_opt9(out, r.total_error_pct_range);
    out << ',' << r.localized_count << ',' << r.node_count << '\n';
  }
}

void emit_plot_data(std::span<const SweepRecord> records, Method m, std::ostream& out) {
  out << "e,total_error_pct_range\n";
  for (const SweepRecord& r : records) {
    if (r.method != m) continue;
    out << format_double9(r.e) << ',';
    put_opt9(out, r.total_error_pct_range);
    out << '\n';
  }
}

void emit_node_details(std::span<const NodeDetail> details, std::ostream& out) {
  out << "e,method,node,attempts,error_distance\n";
  for (const NodeDetail& d : details) {
    out << format_double9(d.e) << ',' << method_name(d.method) << ',' << d.node << ','
        << d.attempts << ',';
    if (d.error_distance)
      out << format_double(*d.error_distance);
    else
      out << "nan";
    out << '\n';
  }
}

LocalizeDetail localize_detail(const NetworkTopology& topo, int node, const ErrorModel& model,
                               Method method, std::uint64_t seed, int max_retries,
                               const ClusterOptions& opts) {
  const auto obs = anchors_of(topo, node);
  if (obs.size() < 3) throw TooFewAnchors(obs.size());

  LocalizeDetail d;
  d.true_position = topo.positions[node];
  const std::uint64_t stream = sweep_stream_seed(seed, 0, node);
  std::vector<Circle> circles(obs.size());
  for (int attempt = 1; attempt <= max_retries + 1; ++attempt) {
    Rng g(derive_seed(stream, static_cast<std::uint64_t>(attempt)));
    for (std::size_t k = 0; k < obs.size(); ++k)
      circles[k] = {obs[k].anchor, apply_error(model, obs[k].distance, g)};
    const PairScan scan = intersection_pairs(circles);
    const auto sel = select_cluster(method, scan, circles, opts);
    d.attempts = attempt;
    if (!sel.empty() || attempt == max_retries + 1) {
      d.circles = circles;
      std::vector<std::size_t> row_start(scan.pairs.size());
      for (std::size_t pi = 0; pi < scan.pairs.size(); ++pi) {
        row_start[pi] = d.points.size();
        const CandidatePair& pair = scan.pairs[pi];
        for (int a = 0; a < pair.point_count; ++a)
          d.points.push_back({pair.points[a], pair.i, pair.j, false});
      }
      std::vector<Point2> pts;
      for (const SelectedPoint& s : sel) {
        d.points[row_start[s.pair_index] + s.point_index].chosen = true;
        pts.push_back(scan.pairs[s.pair_index].points[s.point_index]);
      }
      if (!pts.empty()) d.estimate = centroid(pts);
      break;
    }
  }
  return d;
}

void write_localize_detail(const LocalizeDetail& d, std::ostream& out) {
  out << "ANCHORS\nx,y,est_radius\n";
  for (const Circle& c : d.circles)
    out << format_double(c.center.x) << ',' << format_double(c.center.y) << ','
        << format_double(c.radius) << '\n';
  out << "POINTS\nx,y,pair_i,pair_j,chosen\n";
  for (const auto& pr : d.points)
    out << format_double(pr.p.x) << ',' << format_double(pr.p.y) << ',' << pr.pair_i << ','
        << pr.pair_j << ',' << (pr.chosen ? 1 : 0) << '\n';
  out << "ESTIMATE\nx,y\n";
  if (d.estimate)
    out << format_double(d.estimate->x) << ',' << format_double(d.estimate->y) << '\n';
  else
    out << "nan,nan\n";
  out << "TRUE\nx,y\n"
      << format_double(d.true_position.x) << ',' << format_double(d.true_position.y) << '\n';
}

}  // namespace mlat
