#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mlat/clustering.hpp"

namespace mlat {

struct NetworkConfig {
  double width = 1.0;
  double height = 1.0;
  int node_count = 100;
  double radius = 0.128;  // gives mean connectivity ~4.6 on the defaults
  std::uint64_t seed = 42;
};

// Unit disk graph over uniformly placed nodes. adjacency holds sorted
// neighbour indices; links are symmetric, never self, and use an inclusive
// distance <= radius test.
struct NetworkTopology {
  NetworkConfig config;
  std::vector<Point2> positions;
  std::vector<std::vector<int>> adjacency;
};

void validate(const NetworkConfig& cfg);  // throws std::invalid_argument

NetworkTopology generate(const NetworkConfig& cfg);

// Sum of degrees over node count.
double mean_connectivity(const NetworkTopology& t);

int degree(const NetworkTopology& t, int node);

// Ranging inputs for one node: neighbour positions plus true distances.
std::vector<AnchorObservation> anchors_of(const NetworkTopology& t, int node);

// Radius whose mean connectivity matches target, estimated over seed_count
// seeded placements derived from cfg.seed. Deterministic.
double calibrate_radius(const NetworkConfig& cfg, double target_mean, int seed_count = 16);

// Config as JSON, positions as a node_id,x,y CSV.
void save_topology(const NetworkTopology& t, std::ostream& json_out, std::ostream& csv_out);

// Inverse of save_topology; adjacency is rebuilt from positions and radius.
// Throws ParseError on malformed input.
NetworkTopology load_topology(std::istream& json_in, std::istream& csv_in);

}  // namespace mlat
