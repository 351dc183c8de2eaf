#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "orchid/scenario.hpp"

using namespace orchid;

TEST_CASE("reference scenario shape and determinism") {
  WorldConfig w;
  const Scenario a = generate_scenario(w);
  const Scenario b = generate_scenario(w);
  CHECK(a.users.size() == 50);
  CHECK(a.centers.size() == 5);
  CHECK(scenario_to_json(a).dump() == scenario_to_json(b).dump());
  CHECK(scenario_fingerprint(a) == scenario_fingerprint(b));

  std::vector<int> sizes(5, 0);
  for (int l : a.labels) ++sizes[static_cast<std::size_t>(l)];
  CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);

  w.seed = 43;
  CHECK(scenario_fingerprint(generate_scenario(w)) != scenario_fingerprint(a));
}

TEST_CASE("geometry and membership invariants") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    WorldConfig w;
    w.seed = seed;
    const Scenario s = generate_scenario(w);
    std::vector<int> seen(s.users.size(), 0);
    for (int i : s.gbs_users) ++seen[static_cast<std::size_t>(i)];
    for (int i : s.uav_users) ++seen[static_cast<std::size_t>(i)];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    for (const auto& u : s.users) {
      CHECK(std::isfinite(u.x));
      CHECK(u.x >= 0.0);
      CHECK(u.x <= w.area_side_m);
      CHECK(u.y >= 0.0);
      CHECK(u.y <= w.area_side_m);
    }
  }
}

TEST_CASE("degenerate scatter collapses onto the centers") {
  WorldConfig w;
  w.scatter_sigma_m = 1e-9;
  const Scenario s = generate_scenario(w);
  for (std::size_t i = 0; i < s.users.size(); ++i) {
    CHECK(distance(s.users[i], s.centers[static_cast<std::size_t>(s.labels[i])]) < 1e-6);
  }
}

TEST_CASE("scatter matches the Gaussian parameter") {
  WorldConfig w;
  w.num_users = 10000;
  w.num_clusters = 1;
  w.scatter_sigma_m = 50.0;
  w.area_side_m = 2000.0;  // hotspot far from the edges, so resampling never bites
  w.seed = 5;
  const Scenario s = generate_scenario(w);
  double mx = 0, my = 0;
  for (const auto& u : s.users) {
    mx += u.x;
    my += u.y;
  }
  mx /= 10000.0;
  my /= 10000.0;
  double vx = 0, vy = 0;
  for (const auto& u : s.users) {
    vx += (u.x - mx) * (u.x - mx);
    vy += (u.y - my) * (u.y - my);
  }
  CHECK(std::abs(std::sqrt(vx / 9999.0) - 50.0) / 50.0 < 0.03);
  CHECK(std::abs(std::sqrt(vy / 9999.0) - 50.0) / 50.0 < 0.03);
}

TEST_CASE("partition by nearest hotspot") {
  SUBCASE("zero distance") {
    const std::vector<Vec2> users{{500, 501}, {101, 99}, {499, 500}};
    const std::vector<int> labels{0, 1, 0};
    const auto p = partition_users(users, labels, {{500, 500}, {100, 100}}, {500, 500, 30});
    CHECK(p.gbs_cluster == 0);
    CHECK(p.gbs_users == std::vector<int>{0, 2});
    CHECK(p.uav_users == std::vector<int>{1});
  }
  SUBCASE("ties go to the lower index") {
    const std::vector<Vec2> users{{400, 500}, {600, 500}};
    const auto p = partition_users(users, {0, 1}, {{400, 500}, {600, 500}}, {500, 500, 30});
    CHECK(p.gbs_cluster == 0);
  }
  SUBCASE("matches a brute-force scan") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      WorldConfig w;
      w.seed = seed;
      const Scenario s = generate_scenario(w);
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < s.centers.size(); ++k) {
        const double d = std::hypot(s.centers[k].x - 500.0, s.centers[k].y - 500.0);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(k);
        }
      }
      for (int i : s.gbs_users) CHECK(s.labels[static_cast<std::size_t>(i)] == best);
      for (int i : s.uav_users) CHECK(s.labels[static_cast<std::size_t>(i)] != best);
    }
  }
}

TEST_CASE("save and load") {
  const Scenario s = generate_scenario(WorldConfig{});
  const auto path = (std::filesystem::temp_directory_path() / "orchid_scenario_test.json").string();
  save_scenario(s, path);
  const Scenario t = load_scenario(path);
  CHECK(scenario_to_json(t).dump() == scenario_to_json(s).dump());
  CHECK(t.users == s.users);

  auto j = scenario_to_json(s);
  j["uav_users"].push_back(j["gbs_users"][0]);
  CHECK_THROWS(scenario_from_json(j));
  std::filesystem::remove(path);
}
