#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mlat/clustering.hpp"
#include "mlat/geometry.hpp"
#include "mlat/rng.hpp"

namespace testutil {

// Anchors spread around the target so that it lies strictly inside their
// convex hull (angular gaps below pi minus a margin) and no two anchors are
// close to collinear with it. Collinear-through-target pairs put the pair's
// mirror point next to the target itself, where exact recovery genuinely
// breaks down, so the generator keeps every angle pair away from 0 and pi.
inline std::vector<mlat::AnchorObservation> surrounding_anchors(mlat::Rng& g, mlat::Point2 t,
                                                                int n, double rmin,
                                                                double rmax) {
  constexpr double pi = std::numbers::pi;
  constexpr double margin = 0.08;
  for (;;) {
    std::vector<double> ang(n);
    for (double& a : ang) a = mlat::uniform(g, 0.0, 2.0 * pi);
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + 2.0 * pi - ang.back();
    for (int i = 1; i < n; ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    if (gap >= pi - 0.05) continue;
    bool degenerate = false;
    for (int i = 0; i < n && !degenerate; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double diff = ang[j] - ang[i];
        if (diff < margin || std::abs(diff - pi) < margin || diff > 2.0 * pi - margin) {
          degenerate = true;
          break;
        }
      }
    }
    if (degenerate) continue;
    std::vector<mlat::AnchorObservation> obs(n);
    for (int i = 0; i < n; ++i) {
      const double r = mlat::uniform(g, rmin, rmax);
      const mlat::Point2 a{t.x + r * std::cos(ang[i]), t.y + r * std::sin(ang[i])};
      obs[i] = {a, mlat::distance(t, a)};
    }
    return obs;
  }
}

inline std::vector<mlat::Circle> random_circles(mlat::Rng& g, int n) {
  std::vector<mlat::Circle> cs(n);
  for (auto& c : cs) {
    c.center = {mlat::uniform(g, 0.0, 10.0), mlat::uniform(g, 0.0, 10.0)};
    c.radius = mlat::uniform(g, 0.05, 8.0);
  }
  return cs;
}

}  // namespace testutil
