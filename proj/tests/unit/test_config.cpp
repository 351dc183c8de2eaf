#include <doctest.h>

#include <fstream>

#include "orchid/config.hpp"
#include "orchid/errors.hpp"

using namespace orchid;
using nlohmann::json;

TEST_CASE("defaults carry the reference deployment") {
  const RunConfig c;
  CHECK(c.world.num_users == 50);
  CHECK(c.world.num_uavs == 6);
  CHECK(c.world.num_clusters == 5);
  CHECK(c.world.gbs_position == Vec3{500, 500, 30});
  CHECK(c.env.altitude_min_m == 80.0);
  CHECK(c.env.altitude_max_m == 120.0);
  CHECK(c.env.max_speed_mps == 5.0);
  CHECK(c.env.power_min_mw == 100.0);
  CHECK(c.env.power_max_mw == 200.0);
  CHECK(c.env.bandwidth_hz == 10e6);
  CHECK(c.channel.carrier_hz == 2.4e9);
  CHECK(c.channel.noise_density_dbm_hz == -174.0);
  CHECK(c.learn.discount == 0.99);
  CHECK(c.learn.actor_lr == 1e-4);
  CHECK(c.learn.critic_lr == 1e-3);
  CHECK(c.learn.minibatch_size == 128);
  CHECK(c.learn.hidden_units == 256);
  CHECK(c.learn.hidden_layers == 3);
  CHECK(c.rnf.window == 50);
  CHECK(c.rnf.kappa == 0.1);
  CHECK(c.episodes == 700);
  CHECK(c.seeds.size() == 5);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("json round trip") {
  RunConfig c;
  c.objective = Objective::kProportionalFairness;
  c.env.objective = Objective::kProportionalFairness;
  c.ablation = Ablation::kNoRnf;
  c.rnf.force_trigger_at = 500;
  c.seeds = {7, 9};
  const json j = c;
  const RunConfig back = parse_run_config(j);
  CHECK(json(back) == j);
  CHECK(back.rnf.force_trigger_at == 500);
  CHECK(back.ablation == Ablation::kNoRnf);
}

TEST_CASE("partial configs take defaults") {
  const auto c = parse_run_config(json{{"episodes", 3}, {"world", {{"num_uavs", 2}}}});
  CHECK(c.episodes == 3);
  CHECK(c.world.num_uavs == 2);
  CHECK(c.world.num_users == 50);
}

TEST_CASE("run-level objective propagates to the environment") {
  CHECK(parse_run_config(json{{"objective", "pf"}}).env.objective == Objective::kProportionalFairness);
  const auto c = parse_run_config(json{{"env", {{"objective", "pf"}}}});
  CHECK(c.objective == Objective::kProportionalFairness);
}

TEST_CASE("invalid configs raise ConfigError") {
  CHECK_THROWS_AS(parse_run_config(json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"world", {{"num_uav", 3}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"episodes", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"seeds", json::array()}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"objective", "greedy"}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"ablation", "no_everything"}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"rnf", {{"kappa", 1.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"env", {{"altitude_min_m", 130.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"learn", {{"discount", 1.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"episodes", "many"}}), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"default.json", "desk.json"}) {
    CAPTURE(name);
    const auto c = load_run_config(std::string(ORCHID_CONFIG_DIR) + "/" + name);
    CHECK_NOTHROW(c.validate());
  }
  const auto desk = load_run_config(std::string(ORCHID_CONFIG_DIR) + "/desk.json");
  CHECK(desk.world.num_uavs == 3);
  CHECK(desk.world.num_users == 20);
  CHECK(desk.world.num_clusters == 3);
  CHECK(desk.episodes == 300);
}
