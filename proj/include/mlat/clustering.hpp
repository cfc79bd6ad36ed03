#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mlat/geometry.hpp"

namespace mlat {

// One ranging observation. anchors_of() fills distance with the true value;
// the harness swaps in the estimated one before clustering.
struct AnchorObservation {
  Point2 anchor;
  double distance = 0.0;
};

enum class Method { M1, M2, M3 };

const char* method_name(Method m);  // "m1" / "m2" / "m3"
std::optional<Method> method_from_name(std::string_view s);

// Candidate points contributed by one circle pair; point_count is 1 for a
// tangent pair, otherwise 2.
struct CandidatePair {
  int i = 0;
  int j = 0;
  Point2 points[2];
  int point_count = 0;
};

struct PairScan {
  std::vector<CandidatePair> pairs;
  bool any_disjoint = false;  // some pair had no intersection at all
};

// Pairwise intersection pass over all circles; Coincident pairs contribute
// nothing and None pairs only set any_disjoint.
PairScan intersection_pairs(std::span<const Circle> circles);

struct FavourTally {
  int a = 0;
  int b = 0;
};

// Every circle except the generating two awards one point to the strictly
// closer candidate (distance to that circle's center). Near ties, within
// 1e-9*max(1,da,db), award neither. A tangent pair's single candidate is
// unopposed and collects every award.
FavourTally favour_points(const CandidatePair& pair, std::span<const Circle> circles);

struct Cluster {
  Method method = Method::M1;
  std::vector<Point2> points;
};

struct ClusterOptions {
  // Method 1 only: return an empty cluster as soon as any circle pair fails
  // to intersect, instead of skipping that pair.
  bool strict_pairs = false;
};

// Index of one selected candidate inside a PairScan.
struct SelectedPoint {
  int pair_index = 0;
  int point_index = 0;
};

std::vector<SelectedPoint> select_cluster(Method m, const PairScan& scan,
                                          std::span<const Circle> circles,
                                          const ClusterOptions& opts = {});

// All three throw TooFewAnchors when circles.size() < 3.
Cluster method1(std::span<const Circle> circles, const ClusterOptions& opts = {});
Cluster method2(std::span<const Circle> circles);
Cluster method3(std::span<const Circle> circles);
Cluster run_method(Method m, std::span<const Circle> circles, const ClusterOptions& opts = {});

// Cluster centroid, or nullopt for an empty cluster.
std::optional<Point2> estimate_position(const Cluster& c);

std::vector<Circle> circles_from(std::span<const AnchorObservation> obs);

}  // namespace mlat
