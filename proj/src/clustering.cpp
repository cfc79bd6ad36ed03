#include "mlat/clustering.hpp"

#include "mlat/errors.hpp"

namespace mlat {

const char* method_name(Method m) {
  switch (m) {
    case Method::M1: return "m1";
    case Method::M2: return "m2";
    case Method::M3: return "m3";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view s) {
  if (s == "m1" || s == "M1") return Method::M1;
  if (s == "m2" || s == "M2") return Method::M2;
  if (s == "m3" || s == "M3") return Method::M3;
  return std::nullopt;
}

PairScan intersection_pairs(std::span<const Circle> circles) {
  PairScan scan;
  const int n = static_cast<int>(circles.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Intersection isect = circle_intersections(circles[i], circles[j]);
      if (isect.kind == IntersectKind::None) {
        scan.any_disjoint = true;
        continue;
      }
      if (isect.kind == IntersectKind::Coincident) continue;
      CandidatePair p;
      p.i = i;
      p.j = j;
      p.points[0] = isect.a;
      p.point_count = 1;
      if (isect.kind == IntersectKind::Two) {
        p.points[1] = isect.b;
        p.point_count = 2;
      }
      scan.pairs.push_back(p);
    }
  }
  return scan;
}

FavourTally favour_points(const CandidatePair& pair, std::span<const Circle> circles) {
  FavourTally t;
  const int n = static_cast<int>(circles.size());
  for (int k = 0; k < n; ++k) {
    if (k == pair.i || k == pair.j) continue;
    if (pair.point_count == 1) {
      ++t.a;  // unopposed candidate
      continue;
    }
    const double da = distance(pair.points[0], circles[k].center);
    const double db = distance(pair.points[1], circles[k].center);
    if (std::abs(da - db) <= 1e-9 * std::max({1.0, da, db})) continue;  // tie
    if (da < db)
      ++t.a;
    else
      ++t.b;
  }
  return t;
}

namespace {

bool contained_in_others(Point2 p, std::span<const Circle> circles, int i, int j) {
  const int n = static_cast<int>(circles.size());
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    const double dist = distance(p, circles[k].center);
    if (dist > circles[k].radius + 1e-9 * std::max({1.0, circles[k].radius, dist}))
      return false;
  }
  return true;
}

void require_enough(std::span<const Circle> circles) {
  if (circles.size() < 3) throw TooFewAnchors(circles.size());
}

Cluster materialize(Method m, const PairScan& scan, const std::vector<SelectedPoint>& sel) {
  Cluster c;
  c.method = m;
  c.points.reserve(sel.size());
  for (const SelectedPoint& s : sel)
    c.points.push_back(scan.pairs[s.pair_index].points[s.point_index]);
  return c;
}

}  // namespace

std::vector<SelectedPoint> select_cluster(Method m, const PairScan& scan,
                                          std::span<const Circle> circles,
                                          const ClusterOptions& opts) {
  std::vector<SelectedPoint> sel;
  if (m == Method::M1 && opts.strict_pairs && scan.any_disjoint) return sel;
  const int n = static_cast<int>(circles.size());
  for (int pi = 0; pi < static_cast<int>(scan.pairs.size()); ++pi) {
    const CandidatePair& pair = scan.pairs[pi];
    if (m == Method::M2) {
      for (int a = 0; a < pair.point_count; ++a)
        if (contained_in_others(pair.points[a], circles, pair.i, pair.j))
          sel.push_back({pi, a});
      continue;
    }
    const FavourTally t = favour_points(pair, circles);
    const int fb = pair.point_count == 2 ? t.b : 0;
    if (m == Method::M1) {
      if (t.a > 0 && fb == 0)
        sel.push_back({pi, 0});
      else if (pair.point_count == 2 && fb > 0 && t.a == 0)
        sel.push_back({pi, 1});
    } else {  // M3: the full tally or nothing
      if (t.a == n - 2)
        sel.push_back({pi, 0});
      else if (pair.point_count == 2 && fb == n - 2)
        sel.push_back({pi, 1});
    }
  }
  return sel;
}

Cluster method1(std::span<const Circle> circles, const ClusterOptions& opts) {
  require_enough(circles);
  const PairScan scan = intersection_pairs(circles);
  return materialize(Method::M1, scan, select_cluster(Method::M1, scan, circles, opts));
}

Cluster method2(std::span<const Circle> circles) {
  require_enough(circles);
  const PairScan scan = intersection_pairs(circles);
  return materialize(Method::M2, scan, select_cluster(Method::M2, scan, circles, {}));
}

Cluster method3(std::span<const Circle> circles) {
  require_enough(circles);
  const PairScan scan = intersection_pairs(circles);
  return materialize(Method::M3, scan, select_cluster(Method::M3, scan, circles, {}));
}

Cluster run_method(Method m, std::span<const Circle> circles, const ClusterOptions& opts) {
  switch (m) {
    case Method::M1: return method1(circles, opts);
    case Method::M2: return method2(circles);
    case Method::M3: return method3(circles);
  }
  throw std::invalid_argument("unknown method");
}

std::optional<Point2> estimate_position(const Cluster& c) {
  if (c.points.empty()) return std::nullopt;
  return centroid(c.points);
}

std::vector<Circle> circles_from(std::span<const AnchorObservation> obs) {
  std::vector<Circle> out;
  out.reserve(obs.size());
  for (const AnchorObservation& o : obs) out.push_back({o.anchor, o.distance});
  return out;
}

}  // namespace mlat
