#include "mlat/geometry.hpp"

#include <stdexcept>

namespace mlat {

Intersection circle_intersections(const Circle& ca, const Circle& cb) {
  const double dx = cb.center.x - ca.center.x;
  const double dy = cb.center.y - ca.center.y;
  const double d = std::sqrt(dx * dx + dy * dy);
  const double tau = geometry_tolerance(ca.radius, cb.radius, d);

  Intersection out;
  if (d <= tau && std::abs(ca.radius - cb.radius) <= tau) {
    out.kind = IntersectKind::Coincident;
    return out;
  }
  const double rsum = ca.radius + cb.radius;
  const double rdiff = std::abs(ca.radius - cb.radius);
  if (d > rsum + tau || d < rdiff - tau) {
    out.kind = IntersectKind::None;
    return out;
  }

  // d > 0 here: d == 0 inside the band would need rdiff <= tau, which the
  // coincident branch already took.
  const double ux = dx / d;
  const double uy = dy / d;
  const double a_len = (d * d + ca.radius * ca.radius - cb.radius * cb.radius) / (2.0 * d);
  const Point2 mid{ca.center.x + a_len * ux, ca.center.y + a_len * uy};

  if (std::abs(d - rsum) <= tau || std::abs(d - rdiff) <= tau) {
    out.kind = IntersectKind::Tangent;
    out.a = mid;
    return out;
  }

  out.kind = IntersectKind::Two;
  const double h = std::sqrt(std::max(ca.radius * ca.radius - a_len * a_len, 0.0));
  out.a = {mid.x - h * uy, mid.y + h * ux};
  out.b = {mid.x + h * uy, mid.y - h * ux};
  return out;
}

bool point_in_circle(Point2 p, const Circle& c, double eps) {
  return distance(p, c.center) <= c.radius + eps;
}

Point2 centroid(std::span<const Point2> pts) {
  if (pts.empty()) throw std::invalid_argument("centroid of an empty point set");
  double sx = 0.0;
  double sy = 0.0;
  for (const Point2& p : pts) {
    sx += p.x;
    sy += p.y;
  }
  const double n = static_cast<double>(pts.size());
  return {sx / n, sy / n};
}

}  // namespace mlat
