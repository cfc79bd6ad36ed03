#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mlat/clustering.hpp"
#include "mlat/errors.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace mlat;

namespace {

std::vector<Circle> triangle_fixture() {
  // three anchors ranging on a node at (1,1) with exact distances
  return {{{0, 0}, std::sqrt(2.0)}, {{4, 0}, std::sqrt(10.0)}, {{0, 3}, std::sqrt(5.0)}};
}

int points_near(const Cluster& c, Point2 p, double tol) {
  return static_cast<int>(std::count_if(c.points.begin(), c.points.end(), [&](Point2 q) {
    return distance(p, q) <= tol;
  }));
}

}  // namespace

TEST_CASE("method names") {
  CHECK(method_name(Method::M2) == std::string("m2"));
  CHECK(method_from_name("m3") == Method::M3);
  CHECK(method_from_name("M1") == Method::M1);
  CHECK(!method_from_name("m4").has_value());
}

TEST_CASE("three-anchor fixture localizes to (1,1) under every method") {
  const auto circles = triangle_fixture();
  const PairScan scan = intersection_pairs(circles);
  REQUIRE(scan.pairs.size() == 3);
  CHECK(!scan.any_disjoint);
  for (const auto& pr : scan.pairs) CHECK(pr.point_count == 2);

  for (const Method m : {Method::M1, Method::M2, Method::M3}) {
    const Cluster c = run_method(m, circles);
    CHECK(c.points.size() == 3);
    CHECK(points_near(c, {1, 1}, 1e-9) == 3);
    const auto est = estimate_position(c);
    REQUIRE(est.has_value());
    CHECK(distance(*est, {1, 1}) <= 1e-9);
  }
}

TEST_CASE("favour tally on the fixture") {
  const auto circles = triangle_fixture();
  const PairScan scan = intersection_pairs(circles);
  for (const auto& pr : scan.pairs) {
    const FavourTally t = favour_points(pr, circles);
    CHECK(t.a + t.b == 1);
  }
}

TEST_CASE("fewer than three anchors is refused") {
  const std::vector<Circle> two{{{0, 0}, 1}, {{1, 0}, 1}};
  CHECK_THROWS_AS((void)method1(two), TooFewAnchors);
  CHECK_THROWS_AS((void)method2(two), TooFewAnchors);
  CHECK_THROWS_AS((void)method3(two), TooFewAnchors);
  try {
    (void)run_method(Method::M1, std::vector<Circle>{});
    FAIL("expected TooFewAnchors");
  } catch (const TooFewAnchors& e) {
    CHECK(e.have() == 0);
  }
}

TEST_CASE("tied awards go to neither point") {
  // c2's center is equidistant from both candidates of the (c0, c1) pair
  const std::vector<Circle> circles{
      {{-1, 0}, std::sqrt(2.0)}, {{1, 0}, std::sqrt(2.0)}, {{3, 0}, std::sqrt(10.0)}};
  const PairScan scan = intersection_pairs(circles);
  const auto* pair01 = &scan.pairs[0];
  REQUIRE(pair01->i == 0);
  REQUIRE(pair01->j == 1);
  const FavourTally t = favour_points(*pair01, circles);
  CHECK(t.a == 0);
  CHECK(t.b == 0);

  // no favour points at all, so neither vote-based method keeps the pair
  const auto m1 = testoracle::picks_of(scan, select_cluster(Method::M1, scan, circles));
  const auto m3 = testoracle::picks_of(scan, select_cluster(Method::M3, scan, circles));
  for (const auto& [i, j, p] : m1) CHECK(!(i == 0 && j == 1));
  for (const auto& [i, j, p] : m3) CHECK(!(i == 0 && j == 1));

  // containment keeps both candidates: each lies exactly on c2
  const Cluster m2 = method2(circles);
  CHECK(points_near(m2, {0, 1}, 1e-9) >= 1);
  CHECK(points_near(m2, {0, -1}, 1e-9) >= 1);
}

TEST_CASE("a partial tally satisfies method 1 but not method 3") {
  // c2 ties on the (c0, c1) candidates, c3 favours (0, 1): tally 1 of n-2 = 2
  const std::vector<Circle> circles{{{-1, 0}, std::sqrt(2.0)},
                                    {{1, 0}, std::sqrt(2.0)},
                                    {{3, 0}, std::sqrt(10.0)},
                                    {{0, 2}, 1.0}};
  const PairScan scan = intersection_pairs(circles);
  int idx01 = -1;
  for (int i = 0; i < static_cast<int>(scan.pairs.size()); ++i)
    if (scan.pairs[i].i == 0 && scan.pairs[i].j == 1) idx01 = i;
  REQUIRE(idx01 >= 0);
  const FavourTally t = favour_points(scan.pairs[idx01], circles);
  CHECK(t.a + t.b == 1);

  const auto m1 = testoracle::picks_of(scan, select_cluster(Method::M1, scan, circles));
  const auto m3 = testoracle::picks_of(scan, select_cluster(Method::M3, scan, circles));
  const bool m1_has = std::any_of(m1.begin(), m1.end(), [](const testoracle::Pick& p) {
    return std::get<0>(p) == 0 && std::get<1>(p) == 1;
  });
  const bool m3_has = std::any_of(m3.begin(), m3.end(), [](const testoracle::Pick& p) {
    return std::get<0>(p) == 0 && std::get<1>(p) == 1;
  });
  CHECK(m1_has);
  CHECK(!m3_has);
}

TEST_CASE("a tangent pair's single candidate can carry the cluster") {
  const std::vector<Circle> circles{{{0, 0}, 1}, {{2, 0}, 1}, {{1, 3}, 3}};
  const PairScan scan = intersection_pairs(circles);
  REQUIRE(scan.pairs.size() == 3);
  CHECK(scan.pairs[0].point_count == 1);

  for (const Method m : {Method::M1, Method::M2, Method::M3}) {
    const Cluster c = run_method(m, circles);
    const auto est = estimate_position(c);
    REQUIRE(est.has_value());
    CHECK(distance(*est, {1, 0}) <= 1e-9);
    CHECK(points_near(c, {1, 0}, 1e-9) == static_cast<int>(c.points.size()));
  }
}

TEST_CASE("strict pairs abort method 1 on any disjoint pair") {
  std::vector<Circle> circles{{{0, 0}, 1}, {{2, 0}, 1}, {{1, 3}, 3}};
  circles.push_back({{100, 100}, 0.5});
  const PairScan scan = intersection_pairs(circles);
  CHECK(scan.any_disjoint);
  CHECK(method1(circles, {true}).points.empty());
  CHECK(!method1(circles, {false}).points.empty());
  CHECK(!method3(circles).points.empty());
  // containment can never hold inside the far-away circle
  CHECK(method2(circles).points.empty());
}

TEST_CASE("anchors surrounding the node recover it exactly") {
  Rng g(21);
  for (int it = 0; it < 300; ++it) {
    const Point2 t{uniform(g, 0.0, 1.0), uniform(g, 0.0, 1.0)};
    const int n = 3 + static_cast<int>(g() % 6);
    const auto obs = testutil::surrounding_anchors(g, t, n, 0.2, 1.0);
    const auto circles = circles_from(obs);
    const int pairs = n * (n - 1) / 2;

    for (const Method m : {Method::M1, Method::M3}) {
      const Cluster c = run_method(m, circles);
      REQUIRE(!c.points.empty());
      CHECK(points_near(c, t, 1e-8) == static_cast<int>(c.points.size()));
      const auto est = estimate_position(c);
      REQUIRE(est.has_value());
      CHECK(distance(*est, t) <= 1e-8);
    }

    // containment always keeps every true copy; ghosts may tag along
    const Cluster m2 = method2(circles);
    CHECK(points_near(m2, t, 1e-8) == pairs);
  }
}

TEST_CASE("selection matches the brute-force oracle") {
  Rng g(31);
  for (int it = 0; it < 1000; ++it) {
    const int n = 3 + static_cast<int>(g() % 3);
    const auto circles = testutil::random_circles(g, n);
    const PairScan scan = intersection_pairs(circles);
    for (const Method m : {Method::M1, Method::M2, Method::M3}) {
      const auto got = testoracle::picks_of(scan, select_cluster(m, scan, circles));
      const auto want = testoracle::select(scan, circles, m);
      CHECK(got == want);
    }
    const auto strict_got =
        testoracle::picks_of(scan, select_cluster(Method::M1, scan, circles, {true}));
    const auto strict_want = testoracle::select(scan, circles, Method::M1, true);
    CHECK(strict_got == strict_want);
  }
}

TEST_CASE("method 3 clusters are subsets of method 1 clusters") {
  Rng g(41);
  for (int it = 0; it < 2000; ++it) {
    const int n = 3 + static_cast<int>(g() % 4);
    const auto circles = testutil::random_circles(g, n);
    const PairScan scan = intersection_pairs(circles);
    const auto m1 = testoracle::picks_of(scan, select_cluster(Method::M1, scan, circles));
    const auto m3 = testoracle::picks_of(scan, select_cluster(Method::M3, scan, circles));
    CHECK(std::includes(m1.begin(), m1.end(), m3.begin(), m3.end()));
  }
}

TEST_CASE("empty cluster has no estimate") {
  CHECK(!estimate_position(Cluster{}).has_value());
}
