#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlat/rng.hpp"

namespace mlat {

enum class ErrorModelKind { Constant, Random, Linear, Logarithmic };

enum class Sign { Plus, Minus };

// e is the error level in [0, 1); max_range is read by the Constant model
// only.
struct ErrorModel {
  ErrorModelKind kind = ErrorModelKind::Random;
  double e = 0.0;
  double max_range = 1.0;
};

// Estimated distance for a true one, clamped to >= 0. rng is consulted by
// the Random model only (magnitude draw in [0, e), then sign draw); sign is
// honoured by the Linear model only. e = 0 reproduces real_dist exactly for
// every kind.
double apply_error(const ErrorModel& m, double real_dist, Rng& rng, Sign sign = Sign::Plus);

// Log-normal shadowing channel around reference distance d0.
struct ShadowingParams {
  double rssi0 = -40.0;  // dBm measured at d0
  double d0 = 1.0;       // m, > 0
  double n = 2.0;        // path loss exponent, > 0
  double sigma = 0.0;    // shadowing stddev, dB
};

double rssi_from_distance(const ShadowingParams& p, double dist);
double rssi_from_distance(const ShadowingParams& p, double dist, Rng& noise);
double distance_from_rssi(const ShadowingParams& p, double rssi);

struct RssiSample {
  std::string station_id;
  std::string location_id;
  double true_distance = 0.0;
  double rssi = 0.0;
};

// Reads a station_id,location_id,true_distance,rssi CSV and averages rssi
// and true_distance per (station, location) pair, first-appearance order.
// Throws ParseError on malformed input, with the offending line number.
std::vector<RssiSample> ingest_rssi_trace(std::istream& in);

// true_distance,estimated_distance rows, one per averaged sample.
void write_distance_curve(std::ostream& out, std::span<const RssiSample> samples,
                          const ShadowingParams& p);

struct SyntheticTraceSpec {
  int stations = 1;
  int locations = 82;
  int messages = 200;  // rows per (station, location)
  double d_min = 1.0;
  double d_max = 30.0;
};

// Trace rows for a grid of true distances, with shadowing noise applied per
// message. Deterministic for a given seed.
void write_synthetic_trace(std::ostream& out, const ShadowingParams& p,
                           const SyntheticTraceSpec& spec, std::uint64_t seed);

}  // namespace mlat
