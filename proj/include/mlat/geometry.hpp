#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace mlat {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

struct Circle {
  Point2 center;
  double radius = 0.0;  // >= 0, finite
  friend bool operator==(const Circle&, const Circle&) = default;
};

enum class IntersectKind { None, Tangent, Two, Coincident };

// For Tangent only a is meaningful, for Two both a and b are. Coincident
// circles share every point, so none is reported.
struct Intersection {
  IntersectKind kind = IntersectKind::None;
  Point2 a;
  Point2 b;
};

// Scale-relative tolerance used to separate the tangent/coincident bands
// from the generic two-point case.
inline double geometry_tolerance(double ra, double rb, double d) {
  return 1e-9 * std::max({1.0, ra, rb, d});
}

Intersection circle_intersections(const Circle& a, const Circle& b);

// Inclusive: distance(p, center) <= radius + eps.
bool point_in_circle(Point2 p, const Circle& c, double eps = 0.0);

// Arithmetic mean of a non-empty set. Throws std::invalid_argument when
// pts is empty.
Point2 centroid(std::span<const Point2> pts);

}  // namespace mlat
