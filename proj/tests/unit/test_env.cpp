#include <doctest.h>

#include <cmath>
#include <random>

#include "orchid/baselines.hpp"
#include "orchid/channel.hpp"
#include "orchid/env.hpp"
#include "orchid/network.hpp"

using namespace orchid;
using namespace orchid::env;

namespace {

Scenario reference_scenario() { return generate_scenario(WorldConfig{}); }

std::vector<Vec3> spread_poses() {
  return {{200, 200, 100}, {800, 200, 100}, {200, 800, 100},
          {800, 800, 100}, {500, 150, 100}, {500, 850, 100}};
}

std::vector<ActionVector> zeros(int n) { return std::vector<ActionVector>(static_cast<std::size_t>(n)); }

// Two users: one beside the GBS, one served by the single UAV.
Scenario single_user_scenario() {
  Scenario s;
  s.config.num_users = 2;
  s.config.num_clusters = 2;
  s.config.num_uavs = 1;
  s.users = {{500, 500}, {200, 200}};
  s.labels = {0, 1};
  s.centers = {{500, 500}, {200, 200}};
  s.gbs_users = {0};
  s.uav_users = {1};
  return s;
}

}  // namespace

TEST_CASE("reward assembly") {
  const RewardWeights ones{1, 1, 1, 1, 1};
  RewardComponents c;
  c.coverage = 1.0;
  c.ee = 0.5;
  c.load = 1.0;
  c.rate = 0.4;
  c.penalty = 0.0;
  CHECK(assemble_reward(c, ones, Objective::kMaxMinFairness, 1.0).total == doctest::Approx(2.9).epsilon(1e-15));
  CHECK(assemble_reward(RewardComponents{}, ones, Objective::kMaxMinFairness, 1.0).total == 0.0);
  c.pf = 0.25;
  c.penalty = 0.5;
  // PF swaps the two fairness terms for the utility term.
  CHECK(assemble_reward(c, ones, Objective::kProportionalFairness, 2.0).total ==
        doctest::Approx(1.0 + 0.5 + 0.5 - 0.5).epsilon(1e-15));
}

TEST_CASE("penalty terms") {
  EnvParams p;
  const std::vector<double> strong{30, 30, 30};
  SUBCASE("isolated interior UAV") {
    const std::vector<Vec3> q{{300, 300, 100}};
    const auto pen = compute_penalty(q, {false}, std::vector<double>{30.0}, p);
    CHECK(pen[0].value == 0.0);
  }
  SUBCASE("three mutually colliding UAVs") {
    const std::vector<Vec3> q{{300, 300, 100}, {310, 300, 100}, {305, 308, 100}};
    const auto pen = compute_penalty(q, {false, false, false}, strong, p);
    for (const auto& t : pen) {
      CHECK(t.collisions == 2);
      CHECK(t.value == doctest::Approx(2.0 * p.penalty_collision).epsilon(1e-15));
    }
  }
  SUBCASE("clamp and weak backhaul") {
    const std::vector<Vec3> q{{0, 300, 100}};
    const auto pen = compute_penalty(q, {true}, std::vector<double>{-1.0}, p);
    CHECK(pen[0].boundary);
    CHECK(pen[0].backhaul);
    CHECK(pen[0].value == doctest::Approx(p.penalty_boundary + p.penalty_backhaul).epsilon(1e-15));
  }
  SUBCASE("backhaul at 900 m and minimum power") {
    const ChannelParams c;
    const Vec3 gbs{500, 500, 30};
    const Vec3 uav{500 + 900, 500, 80};
    const double snr = backhaul_snr_db(uav, p.power_min_mw, gbs, c, p.bandwidth_hz);
    const double oracle = channel::snr_db(channel::mw_to_dbm(p.power_min_mw),
                                          channel::free_space_pathloss_db(distance(uav, gbs), c) + c.eta_los_db,
                                          c, p.bandwidth_hz);
    CHECK(snr == doctest::Approx(oracle).epsilon(1e-12));
    const std::vector<Vec3> q{uav};
    const auto pen = compute_penalty(q, {false}, std::vector<double>{snr}, p);
    CHECK(pen[0].backhaul == (snr < 0.0));
  }
}

TEST_CASE("running min-max") {
  RunningMinMax n;
  CHECK(n.normalize(5.0) == 0.0);
  CHECK(n.normalize(5.0) == 0.0);
  CHECK(n.normalize(7.0) == 1.0);
  CHECK(n.normalize(6.0) == 0.5);
  CHECK(n.count() == 4);
}

TEST_CASE("reset") {
  const auto s = reference_scenario();
  CoverageEnv env(s, {}, {});
  SUBCASE("center pose normalizes to the midpoint") {
    auto poses = spread_poses();
    poses[0] = {500, 500, 100};
    const auto out = env.reset(poses, 1);
    CHECK(out.observations[0][0] == 0.5);
    CHECK(out.observations[0][1] == 0.5);
    CHECK(out.observations[0][2] == 0.5);
    CHECK(out.observations[0][3] == 0.5);
    for (int k = 6; k < 10; ++k) CHECK(out.observations[0][static_cast<std::size_t>(k)] == 1.0);
  }
  SUBCASE("loads match Max-RSSI association at Phase-I poses") {
    std::mt19937_64 rng(1);
    const auto poses = baselines::phase1_poses(s, {}, 5, rng);
    const auto out = env.reset(poses, 1);
    const std::vector<double> p_dbm(6, channel::mw_to_dbm(150.0));
    const auto assoc = network::associate_max_rssi(poses, p_dbm, s.uav_user_positions(), {});
    const auto m_uav = static_cast<double>(s.uav_users.size());
    for (std::size_t n = 0; n < 6; ++n) {
      CHECK(out.observations[n][5] == doctest::Approx(assoc.loads[n] / m_uav).epsilon(1e-15));
      CHECK(out.info.loads[n] == assoc.loads[n]);
    }
  }
  SUBCASE("deterministic") {
    const auto a = env.reset(spread_poses(), 9);
    const auto b = env.reset(spread_poses(), 9);
    CHECK(a.observations == b.observations);
    CHECK(a.global_state == b.global_state);
    CHECK(static_cast<int>(a.global_state.size()) == env.state_dim());
    CHECK(env.state_dim() == 6 * kObsDim + 16 + 1);
  }
  SUBCASE("rejects infeasible poses") {
    auto poses = spread_poses();
    poses[2].z = 150.0;
    CHECK_THROWS_AS(env.reset(poses, 1), std::invalid_argument);
    poses.pop_back();
    CHECK_THROWS_AS(env.reset(poses, 1), std::invalid_argument);
  }
  SUBCASE("shadowing depends only on the episode seed") {
    env.reset(spread_poses(), 3);
    const auto a = env.gbs_user_snr_db();
    env.reset(spread_poses(), 4);
    const auto b = env.gbs_user_snr_db();
    env.reset(spread_poses(), 3);
    CHECK(env.gbs_user_snr_db() == a);
    CHECK(a != b);
  }
}

TEST_CASE("step kinematics") {
  const auto s = reference_scenario();
  CoverageEnv env(s, {}, {});
  const auto poses = spread_poses();
  SUBCASE("zero actions hold the pose") {
    env.reset(poses, 1);
    const auto out = env.step(zeros(6));
    CHECK(env.state().positions == poses);
    for (double p : env.state().powers_mw) CHECK(p == 150.0);
    for (const auto& b : out.breakdowns) CHECK(b.components.penalty == 0.0);
  }
  SUBCASE("full x action moves V_max * dt") {
    env.reset(poses, 1);
    auto a = zeros(6);
    a[0] = {1, 0, 0, 0};
    env.step(a);
    CHECK(env.state().positions[0].x == doctest::Approx(205.0).epsilon(1e-15));
    CHECK(env.state().positions[0].y == 200.0);
  }
  SUBCASE("diagonal motion is projected onto the speed limit") {
    env.reset(poses, 1);
    auto a = zeros(6);
    a[0] = {1, 1, 1, 1};
    env.step(a);
    const auto& q = env.state().positions[0];
    CHECK(std::hypot(q.x - 200.0, q.y - 200.0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(q.z == doctest::Approx(101.0).epsilon(1e-15));
    CHECK(env.state().powers_mw[0] == 160.0);
  }
  SUBCASE("40 m separation is a collision") {
    auto close = poses;
    close[1] = {240, 200, 100};
    env.reset(close, 1);
    const auto out = env.step(zeros(6));
    CHECK(out.breakdowns[0].components.penalty >= EnvParams{}.penalty_collision);
    CHECK(out.breakdowns[1].components.penalty >= EnvParams{}.penalty_collision);
  }
  SUBCASE("leaving the area is clamped and penalized") {
    auto edge = poses;
    edge[0] = {2, 500, 80};
    env.reset(edge, 1);
    auto a = zeros(6);
    a[0] = {-1, 0, -1, 0};
    const auto out = env.step(a);
    CHECK(env.state().positions[0].x == 0.0);
    CHECK(env.state().positions[0].z == 80.0);
    CHECK(out.info.clamped[0]);
    CHECK(out.observations[0][11] == 1.0);
  }
  SUBCASE("power saturates without a boundary flag") {
    env.reset(poses, 1);
    auto a = zeros(6);
    a[0] = {0, 0, 0, 1};
    for (int t = 0; t < 8; ++t) {
      const auto out = env.step(a);
      CHECK_FALSE(out.info.clamped[0]);
    }
    CHECK(env.state().powers_mw[0] == 200.0);
  }
  SUBCASE("episode length and misuse") {
    env.reset(poses, 1);
    for (int t = 0; t < 99; ++t) CHECK_FALSE(env.step(zeros(6)).done);
    CHECK(env.step(zeros(6)).done);
    CHECK_THROWS_AS(env.step(zeros(6)), std::logic_error);
    env.reset(poses, 1);
    auto a = zeros(6);
    a[3][1] = std::nan("");
    CHECK_THROWS_AS(env.step(a), std::invalid_argument);
  }
}

TEST_CASE("reward decomposition and team symmetry") {
  const auto s = reference_scenario();
  for (auto objective : {Objective::kMaxMinFairness, Objective::kProportionalFairness}) {
    EnvParams p;
    p.objective = objective;
    CoverageEnv env(s, {}, p);
    env.reset(spread_poses(), 5);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      auto a = zeros(6);
      for (auto& v : a) for (auto& x : v) x = u(rng);
      const auto out = env.step(a);
      const auto& c0 = out.breakdowns[0].components;
      for (std::size_t n = 0; n < 6; ++n) {
        const auto& c = out.breakdowns[n].components;
        CHECK(c.coverage == c0.coverage);
        CHECK(c.ee == c0.ee);
        CHECK(c.load == c0.load);
        CHECK(c.rate == c0.rate);
        CHECK(c.pf == c0.pf);
        const auto& w = p.weights;
        const double fairness = objective == Objective::kMaxMinFairness ? w[2] * c.load + w[3] * c.rate
                                                                        : p.pf_weight * c.pf;
        const double recombined = w[0] * c.coverage + w[1] * c.ee + fairness - w[4] * c.penalty;
        CHECK(std::abs(out.rewards[n] - recombined) < 1e-12);
      }
    }
  }
}

TEST_CASE("proportional-fairness utility with a single user") {
  EnvParams p;
  p.objective = Objective::kProportionalFairness;
  CoverageEnv env(single_user_scenario(), {}, p);
  const std::vector<Vec3> pose{{250, 250, 100}};
  env.reset(pose, 1);
  const auto out = env.step(zeros(1));
  REQUIRE(out.info.rates_bps.size() == 1);
  CHECK(out.breakdowns[0].components.pf_utility ==
        doctest::Approx(std::log(1.0 + out.info.rates_bps[0])).epsilon(1e-15));
}

TEST_CASE("episode determinism") {
  const auto s = reference_scenario();
  std::vector<std::vector<double>> rewards[2];
  for (int run = 0; run < 2; ++run) {
    CoverageEnv env(s, {}, {});
    env.reset(spread_poses(), 77);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (!env.done()) {
      auto a = zeros(6);
      for (auto& v : a) for (auto& x : v) x = u(rng);
      rewards[run].push_back(env.step(a).rewards);
    }
  }
  CHECK(rewards[0] == rewards[1]);
}

TEST_CASE("random steps keep the fleet feasible") {
  const auto s = reference_scenario();
  EnvParams p;
  CoverageEnv env(s, {}, p);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int steps = 0;
  while (steps < 2000) {
    env.reset(baselines::random_feasible_poses(s.config, p, rng), static_cast<std::uint64_t>(steps));
    while (!env.done()) {
      auto a = zeros(6);
      for (auto& v : a) for (auto& x : v) x = 3.0 * u(rng);
      const auto out = env.step(a);
      ++steps;
      for (std::size_t n = 0; n < 6; ++n) {
        CHECK(env.feasible(env.state().positions[n]));
        CHECK(env.state().powers_mw[n] >= p.power_min_mw);
        CHECK(env.state().powers_mw[n] <= p.power_max_mw);
        if (out.info.clamped[n]) CHECK(out.breakdowns[n].components.penalty >= p.penalty_boundary);
        for (double o : out.observations[n]) {
          CHECK(o >= 0.0);
          CHECK(o <= 1.0);
        }
      }
    }
  }
}
