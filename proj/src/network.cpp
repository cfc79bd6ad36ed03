#include "mlat/network.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "mlat/errors.hpp"
#include "mlat/format.hpp"
#include "mlat/rng.hpp"

namespace mlat {

void validate(const NetworkConfig& cfg) {
  if (!(cfg.width > 0.0 && std::isfinite(cfg.width)))
    throw std::invalid_argument("width must be positive");
  if (!(cfg.height > 0.0 && std::isfinite(cfg.height)))
    throw std::invalid_argument("height must be positive");
  if (cfg.node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  if (!(cfg.radius > 0.0 && std::isfinite(cfg.radius)))
    throw std::invalid_argument("radius must be positive");
}

namespace {

std::vector<Point2> draw_positions(const NetworkConfig& cfg) {
  std::vector<Point2> pos;
  pos.reserve(cfg.node_count);
  Rng g(cfg.seed);
  for (int i = 0; i < cfg.node_count; ++i) {
    const double x = uniform(g, 0.0, cfg.width);
    const double y = uniform(g, 0.0, cfg.height);
    pos.push_back({x, y});
  }
  return pos;
}

std::vector<std::vector<int>> build_adjacency(const std::vector<Point2>& pos, double radius) {
  const int n = static_cast<int>(pos.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (distance(pos[i], pos[j]) <= radius) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  return adj;
}

}  // namespace

NetworkTopology generate(const NetworkConfig& cfg) {
  validate(cfg);
  NetworkTopology t;
  t.config = cfg;
  t.positions = draw_positions(cfg);
  t.adjacency = build_adjacency(t.positions, cfg.radius);
  return t;
}

double mean_connectivity(const NetworkTopology& t) {
  if (t.positions.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& nb : t.adjacency) total += nb.size();
  return static_cast<double>(total) / static_cast<double>(t.positions.size());
}

int degree(const NetworkTopology& t, int node) {
  if (node < 0 || node >= static_cast<int>(t.adjacency.size()))
    throw std::invalid_argument("node index out of range");
  return static_cast<int>(t.adjacency[node].size());
}

std::vector<AnchorObservation> anchors_of(const NetworkTopology& t, int node) {
  if (node < 0 || node >= static_cast<int>(t.positions.size()))
    throw std::invalid_argument("node index out of range");
  std::vector<AnchorObservation> out;
  out.reserve(t.adjacency[node].size());
  for (int j : t.adjacency[node])
    out.push_back({t.positions[j], distance(t.positions[node], t.positions[j])});
  return out;
}

double calibrate_radius(const NetworkConfig& cfg, double target_mean, int seed_count) {
  validate(cfg);
  if (seed_count < 1) throw std::invalid_argument("seed_count must be >= 1");
  if (!(target_mean > 0.0 && target_mean < cfg.node_count))
    throw std::invalid_argument("target mean connectivity out of range");

  // Mean connectivity at radius r is 2*#{pairwise distances <= r}/(n*seeds),
  // so the calibrated radius is an order statistic of the pooled distances.
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(seed_count) * cfg.node_count * (cfg.node_count - 1) / 2);
  for (int s = 0; s < seed_count; ++s) {
    NetworkConfig c = cfg;
    c.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(s));
    const auto pos = draw_positions(c);
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = i + 1; j < pos.size(); ++j) dists.push_back(distance(pos[i], pos[j]));
  }
  std::sort(dists.begin(), dists.end());
  const double wanted = target_mean * cfg.node_count / 2.0 * seed_count;
  std::size_t k = static_cast<std::size_t>(std::llround(wanted));
  k = std::clamp<std::size_t>(k, 1, dists.size());
  return dists[k - 1];
}

void save_topology(const NetworkTopology& t, std::ostream& json_out, std::ostream& csv_out) {
  const nlohmann::json j{{"width", t.config.width},
                         {"height", t.config.height},
                         {"node_count", t.config.node_count},
                         {"radius", t.config.radius},
                         {"seed", t.config.seed}};
  json_out << j.dump(2) << '\n';
  csv_out << "node_id,x,y\n";
  for (std::size_t i = 0; i < t.positions.size(); ++i)
    csv_out << i << ',' << format_double(t.positions[i].x) << ','
            << format_double(t.positions[i].y) << '\n';
}

NetworkTopology load_topology(std::istream& json_in, std::istream& csv_in) {
  NetworkTopology t;
  try {
    const nlohmann::json j = nlohmann::json::parse(json_in);
    t.config.width = j.at("width").get<double>();
    t.config.height = j.at("height").get<double>();
    t.config.node_count = j.at("node_count").get<int>();
    t.config.radius = j.at("radius").get<double>();
    t.config.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("topology config: ") + ex.what());
  }
  try {
    validate(t.config);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(std::string("topology config: ") + ex.what());
  }

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(csv_in, line)) throw ParseError("empty topology csv");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "node_id,x,y") throw ParseError("unexpected header '" + line + "'", lineno);

  while (std::getline(csv_in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), lineno);
    const auto id = parse_int(fields[0]);
    if (!id || *id != static_cast<long long>(t.positions.size()))
      throw ParseError("node ids must be sequential from 0", lineno);
    const auto x = parse_double(fields[1]);
    const auto y = parse_double(fields[2]);
    if (!x || !std::isfinite(*x) || !y || !std::isfinite(*y))
      throw ParseError("bad coordinate", lineno);
    if (*x < 0.0 || *x > t.config.width || *y < 0.0 || *y > t.config.height)
      throw ParseError("position outside the region", lineno);
    t.positions.push_back({*x, *y});
  }
  if (static_cast<int>(t.positions.size()) != t.config.node_count)
    throw ParseError("expected " + std::to_string(t.config.node_count) + " nodes, got " +
                     std::to_string(t.positions.size()));

  t.adjacency = build_adjacency(t.positions, t.config.radius);
  return t;
}

}  // namespace mlat
