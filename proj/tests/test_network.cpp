#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlat/errors.hpp"
#include "mlat/network.hpp"
#include "mlat/rng.hpp"

using namespace mlat;

namespace {

NetworkTopology chain3() {
  std::istringstream json_in(
      R"({"width": 2.0, "height": 1.0, "node_count": 3, "radius": 1.0, "seed": 1})");
  std::istringstream csv_in("node_id,x,y\n0,0,0\n1,1,0\n2,2,0\n");
  return load_topology(json_in, csv_in);
}

}  // namespace

TEST_CASE("generation is deterministic and in bounds") {
  NetworkConfig cfg;
  cfg.width = 2.0;
  cfg.height = 3.0;
  cfg.node_count = 150;
  cfg.radius = 0.4;
  cfg.seed = 7;
  const NetworkTopology a = generate(cfg);
  const NetworkTopology b = generate(cfg);
  REQUIRE(a.positions.size() == 150);
  CHECK(a.positions == b.positions);
  CHECK(a.adjacency == b.adjacency);
  for (const Point2& p : a.positions) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= cfg.width);
    CHECK(p.y >= 0.0);
    CHECK(p.y <= cfg.height);
  }
  cfg.seed = 8;
  CHECK(generate(cfg).positions != a.positions);
}

TEST_CASE("adjacency matches the inclusive disk predicate") {
  NetworkConfig cfg;
  cfg.node_count = 80;
  cfg.radius = 0.3;
  cfg.seed = 3;
  const NetworkTopology t = generate(cfg);
  for (int i = 0; i < 80; ++i) {
    CHECK(std::is_sorted(t.adjacency[i].begin(), t.adjacency[i].end()));
    for (int j = 0; j < 80; ++j) {
      const bool linked = std::binary_search(t.adjacency[i].begin(), t.adjacency[i].end(), j);
      const bool expected = i != j && distance(t.positions[i], t.positions[j]) <= cfg.radius;
      CHECK(linked == expected);
      const bool back = std::binary_search(t.adjacency[j].begin(), t.adjacency[j].end(), i);
      CHECK(linked == back);
    }
  }
}

TEST_CASE("chain fixture degrees and connectivity") {
  const NetworkTopology t = chain3();
  CHECK(degree(t, 0) == 1);
  CHECK(degree(t, 1) == 2);
  CHECK(degree(t, 2) == 1);
  CHECK(mean_connectivity(t) == doctest::Approx(4.0 / 3.0));

  const auto obs = anchors_of(t, 1);
  REQUIRE(obs.size() == 2);
  CHECK(obs[0].anchor == t.positions[0]);
  CHECK(obs[0].distance == doctest::Approx(1.0));
  CHECK(obs[1].distance == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)anchors_of(t, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)degree(t, -1), std::invalid_argument);
}

TEST_CASE("config validation") {
  NetworkConfig cfg;
  cfg.node_count = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.width = -1.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.radius = 0.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = {};
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("saved topologies round-trip exactly") {
  NetworkConfig cfg;
  cfg.node_count = 20;
  cfg.radius = 0.35;
  cfg.seed = 99;
  const NetworkTopology t = generate(cfg);
  std::ostringstream json_out, csv_out;
  save_topology(t, json_out, csv_out);

  CHECK(csv_out.str().substr(0, 12) == "node_id,x,y\n");
  const auto parsed = nlohmann::json::parse(json_out.str());
  CHECK(parsed.at("node_count").get<int>() == 20);
  CHECK(parsed.at("radius").get<double>() == 0.35);
  CHECK(parsed.at("seed").get<std::uint64_t>() == 99);

  std::istringstream json_in(json_out.str());
  std::istringstream csv_in(csv_out.str());
  const NetworkTopology back = load_topology(json_in, csv_in);
  CHECK(back.positions == t.positions);
  CHECK(back.adjacency == t.adjacency);
  CHECK(back.config.radius == t.config.radius);
}

TEST_CASE("loading rejects malformed topologies") {
  auto load = [](const std::string& json_text, const std::string& csv_text) {
    std::istringstream json_in(json_text);
    std::istringstream csv_in(csv_text);
    return load_topology(json_in, csv_in);
  };
  const std::string good_json =
      R"({"width": 1.0, "height": 1.0, "node_count": 2, "radius": 0.5, "seed": 1})";
  CHECK_THROWS_AS((void)load("not json", "node_id,x,y\n0,0,0\n1,1,1\n"), ParseError);
  CHECK_THROWS_AS((void)load(good_json, "wrong,header\n0,0,0\n1,1,1\n"), ParseError);
  CHECK_THROWS_AS((void)load(good_json, "node_id,x,y\n0,0,0\n2,1,1\n"), ParseError);
  CHECK_THROWS_AS((void)load(good_json, "node_id,x,y\n0,0,0\n"), ParseError);
  CHECK_THROWS_AS((void)load(good_json, "node_id,x,y\n0,0,0\n1,1,1\n2,0.5,0.5\n"), ParseError);
  CHECK_THROWS_AS((void)load(good_json, "node_id,x,y\n0,0,0\n1,5,1\n"), ParseError);
  CHECK_THROWS_AS((void)load(good_json, "node_id,x,y\n0,0,0\n1,x,1\n"), ParseError);
  CHECK_NOTHROW((void)load(good_json, "node_id,x,y\n0,0,0\n1,1,1\n"));
}

TEST_CASE("calibrated radius hits the connectivity target") {
  NetworkConfig cfg;
  const double target = 4.582;
  const double r = calibrate_radius(cfg, target, 12);
  CHECK(r > 0.05);
  CHECK(r < 0.2);

  Rng g(1234);
  double sum = 0.0;
  const int reps = 60;
  for (int i = 0; i < reps; ++i) {
    NetworkConfig c = cfg;
    c.radius = r;
    c.seed = g();
    sum += mean_connectivity(generate(c));
  }
  CHECK(std::abs(sum / reps - target) < 0.35);
}
