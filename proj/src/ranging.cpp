#include "mlat/ranging.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "mlat/errors.hpp"
#include "mlat/format.hpp"

namespace mlat {

namespace {

void check_model(const ErrorModel& m) {
  if (!(m.e >= 0.0 && m.e < 1.0))
    throw std::invalid_argument("error level e must be in [0, 1)");
  if (m.kind == ErrorModelKind::Constant && !(m.max_range > 0.0 && std::isfinite(m.max_range)))
    throw std::invalid_argument("max_range must be positive and finite");
}

void check_shadowing(const ShadowingParams& p) {
  if (!std::isfinite(p.rssi0)) throw std::invalid_argument("rssi0 must be finite");
  if (!(p.d0 > 0.0 && std::isfinite(p.d0))) throw std::invalid_argument("d0 must be positive");
  if (!(p.n > 0.0 && std::isfinite(p.n)))
    throw std::invalid_argument("path loss exponent must be positive");
  if (!(p.sigma >= 0.0 && std::isfinite(p.sigma)))
    throw std::invalid_argument("sigma must be non-negative");
}

}  // namespace

double apply_error(const ErrorModel& m, double real_dist, Rng& rng, Sign sign) {
  check_model(m);
  if (!(real_dist >= 0.0 && std::isfinite(real_dist)))
    throw std::invalid_argument("distance must be non-negative and finite");
  double est = real_dist;
  switch (m.kind) {
    case ErrorModelKind::Constant:
      est = real_dist + m.e * m.max_range;
      break;
    case ErrorModelKind::Random: {
      const double mag = uniform(rng, 0.0, m.e);
      const double s = uniform01(rng) < 0.5 ? 1.0 : -1.0;
      est = real_dist + s * mag * real_dist;
      break;
    }
    case ErrorModelKind::Linear:
      est = sign == Sign::Plus ? real_dist + m.e * real_dist : real_dist - m.e * real_dist;
      break;
    case ErrorModelKind::Logarithmic:
      est = real_dist > 0.0 ? real_dist + std::log(real_dist) * m.e : real_dist;
      break;
  }
  return std::max(est, 0.0);
}

double rssi_from_distance(const ShadowingParams& p, double dist) {
  check_shadowing(p);
  if (!(dist > 0.0 && std::isfinite(dist)))
    throw std::invalid_argument("distance must be positive");
  return p.rssi0 - 10.0 * p.n * std::log10(dist / p.d0);
}

double rssi_from_distance(const ShadowingParams& p, double dist, Rng& noise) {
  return rssi_from_distance(p, dist) + normal(noise, 0.0, p.sigma);
}

double distance_from_rssi(const ShadowingParams& p, double rssi) {
  check_shadowing(p);
  if (!std::isfinite(rssi)) throw std::invalid_argument("rssi must be finite");
  return p.d0 * std::pow(10.0, (p.rssi0 - rssi) / (10.0 * p.n));
}

std::vector<RssiSample> ingest_rssi_trace(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty trace");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "station_id,location_id,true_distance,rssi")
    throw ParseError("unexpected header '" + line + "'", lineno);

  struct Group {
    RssiSample key;
    double dist_sum = 0.0;
    double rssi_sum = 0.0;
    int count = 0;
  };
  std::vector<Group> groups;
  std::unordered_map<std::string, std::size_t> index;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), lineno);
    const std::string station{trim(fields[0])};
    const std::string location{trim(fields[1])};
    if (station.empty() || location.empty()) throw ParseError("empty id field", lineno);
    const auto dist = parse_double(fields[2]);
    if (!dist || !(*dist >= 0.0) || !std::isfinite(*dist))
      throw ParseError("bad true_distance '" + std::string(trim(fields[2])) + "'", lineno);
    const auto rssi = parse_double(fields[3]);
    if (!rssi || !std::isfinite(*rssi))
      throw ParseError("bad rssi '" + std::string(trim(fields[3])) + "'", lineno);

    const std::string key = station + '\x1f' + location;
    const auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) groups.push_back({{station, location, 0.0, 0.0}, 0.0, 0.0, 0});
    Group& g = groups[it->second];
    g.dist_sum += *dist;
    g.rssi_sum += *rssi;
    ++g.count;
  }
  if (groups.empty()) throw ParseError("trace has no data rows");

  std::vector<RssiSample> out;
  out.reserve(groups.size());
  for (const Group& g : groups)
    out.push_back({g.key.station_id, g.key.location_id, g.dist_sum / g.count,
                   g.rssi_sum / g.count});
  return out;
}

void write_distance_curve(std::ostream& out, std::span<const RssiSample> samples,
                          const ShadowingParams& p) {
  out << "true_distance,estimated_distance\n";
  for (const RssiSample& s : samples)
    out << format_double(s.true_distance) << ',' << format_double(distance_from_rssi(p, s.rssi))
        << '\n';
}

void write_synthetic_trace(std::ostream& out, const ShadowingParams& p,
                           const SyntheticTraceSpec& spec, std::uint64_t seed) {
  check_shadowing(p);
  if (spec.stations < 1 || spec.locations < 1 || spec.messages < 1)
    throw std::invalid_argument("synthetic trace counts must be >= 1");
  if (!(spec.d_min > 0.0 && spec.d_max >= spec.d_min && std::isfinite(spec.d_max)))
    throw std::invalid_argument("bad synthetic distance range");

  out << "station_id,location_id,true_distance,rssi\n";
  for (int s = 0; s < spec.stations; ++s) {
    for (int l = 0; l < spec.locations; ++l) {
      const double d = spec.locations == 1
                           ? spec.d_min
                           : spec.d_min + (spec.d_max - spec.d_min) * l / (spec.locations - 1);
      Rng g(derive_seed(seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(l)));
      for (int msg = 0; msg < spec.messages; ++msg)
        out << 's' << s << ",l" << l << ',' << format_double(d) << ','
            << format_double(rssi_from_distance(p, d, g)) << '\n';
    }
  }
}

}  // namespace mlat
