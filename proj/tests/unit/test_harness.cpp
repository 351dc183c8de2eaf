#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "harness_fixtures.hpp"
#include "orchid/baselines.hpp"
#include "orchid/errors.hpp"
#include "orchid/evaluate.hpp"
#include "orchid/export.hpp"
#include "orchid/run_log.hpp"
#include "orchid/seeding.hpp"
#include "orchid/trainer.hpp"

using namespace orchid;
using namespace orchid::testing;
namespace fs = std::filesystem;

namespace {

bool same_row(const LogRow& a, const LogRow& b) {
  return a.seed == b.seed && a.episode == b.episode && a.total_reward == b.total_reward &&
         a.nee == b.nee && a.jfi_load == b.jfi_load && a.jfi_rate == b.jfi_rate &&
         a.coverage_pct == b.coverage_pct && a.eta_actor == b.eta_actor &&
         a.eta_critic == b.eta_critic && a.rnf_triggered == b.rnf_triggered;
}

std::vector<LogRow> sorted(std::vector<LogRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const LogRow& a, const LogRow& b) {
    return std::pair(a.seed, a.episode) < std::pair(b.seed, b.episode);
  });
  return rows;
}

std::vector<LogRow> rows_for(const std::vector<LogRow>& rows, std::uint64_t seed) {
  std::vector<LogRow> out;
  for (const auto& r : rows) {
    if (r.seed == seed) out.push_back(r);
  }
  return out;
}

std::vector<std::string> lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

bool feasible(const std::vector<Vec3>& poses, const RunConfig& c) {
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto& p = poses[i];
    if (p.x < 0 || p.x > c.world.area_side_m || p.y < 0 || p.y > c.world.area_side_m) return false;
    if (p.z < c.env.altitude_min_m || p.z > c.env.altitude_max_m) return false;
    for (std::size_t j = 0; j < i; ++j) {
      const double d = std::hypot(p.x - poses[j].x, p.y - poses[j].y, p.z - poses[j].z);
      if (d < c.env.min_separation_m) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("run log round trip") {
  const TempDir dir;
  std::vector<LogRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].seed = 7;
    rows[i].episode = i + 1;
    rows[i].total_reward = 0.1 * (i + 1) / 3.0;
    rows[i].nee = 1.0 / 3.0;
    rows[i].jfi_rate = 0.123456789012345678;
    rows[i].eta_actor = 1e-5;
    rows[i].rnf_triggered = i == 2;
  }
  write_run_log(dir / "log.csv", rows);
  const auto back = read_run_log(dir / "log.csv");
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(same_row(back[i], rows[i]));
  CHECK(lines(dir / "log.csv")[0] ==
        "seed,episode,total_reward,nee,jfi_load,jfi_rate,coverage_pct,eta_actor,eta_critic,rnf_triggered");

  std::ofstream(dir / "bad.csv") << "seed,episode,reward\n1,1,0\n";
  CHECK_THROWS(read_run_log(dir / "bad.csv"));
}

TEST_CASE("training writes logs, checkpoints and a manifest") {
  const auto cfg = tiny_config();
  const auto sc = tiny_scenario(cfg);
  const TempDir dir;
  const auto result = train(cfg, sc, dir.str());
  CHECK(result.rows.size() == 12);
  CHECK(read_run_log(dir / "log.csv").size() == 12);
  CHECK(fs::exists(checkpoint_path(dir.str(), 1, 3)));
  CHECK(fs::exists(checkpoint_path(dir.str(), 2, 6)));
  CHECK(fs::exists(fs::path(dir.str()) / "seed_1" / "final.bin"));
  const auto manifest = read_run_manifest(dir.str());
  REQUIRE(manifest);
  CHECK(manifest->method == "orchid");
  CHECK(manifest->scenario_fingerprint == scenario_fingerprint(sc));
  CHECK(manifest->trigger_episodes.size() == 2);
  for (const auto& r : result.rows) {
    CHECK(r.rnf_triggered == (r.episode >= 4));
    const double expected = r.episode >= 4 ? cfg.rnf.kappa * cfg.learn.actor_lr : cfg.learn.actor_lr;
    CHECK(r.eta_actor == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("resume reproduces the uninterrupted run") {
  const auto cfg = tiny_config();
  const auto sc = tiny_scenario(cfg);
  const TempDir dir;
  const auto full = sorted(train(cfg, sc, dir.str()).rows);
  resume_training(checkpoint_path(dir.str(), 1, 3), sc, dir.str());
  const auto resumed = sorted(read_run_log(dir / "log.csv"));
  REQUIRE(resumed.size() == full.size());
  for (std::size_t i = 0; i < full.size(); ++i) CHECK(same_row(resumed[i], full[i]));
  CHECK(read_run_manifest(dir.str())->trigger_episodes.size() == 2);
}

TEST_CASE("resume through the trainer is bit-exact") {
  const auto cfg = tiny_config();
  const auto sc = tiny_scenario(cfg);
  Trainer a(cfg, sc, 2);
  for (int e = 0; e < 3; ++e) a.run_episode();
  const TempDir dir;
  save_checkpoint(a.checkpoint(), dir / "mid.bin");
  Trainer b(load_checkpoint(dir / "mid.bin"), sc);
  while (!a.finished()) CHECK(same_row(a.run_episode(), b.run_episode()));
  CHECK(b.finished());
}

TEST_CASE("seeds are isolated from each other and from their order") {
  auto cfg = tiny_config();
  cfg.episodes = 3;
  const auto sc = tiny_scenario(cfg);
  const TempDir a, b;
  const auto both = train(cfg, sc, a.str()).rows;
  cfg.seeds = {2};
  const auto only = train(cfg, sc, b.str()).rows;
  const auto from_both = rows_for(both, 2);
  REQUIRE(from_both.size() == only.size());
  for (std::size_t i = 0; i < only.size(); ++i) CHECK(same_row(from_both[i], only[i]));

  cfg.seeds = {2, 1};
  const auto swapped = sorted(train(cfg, sc, b.str()).rows);
  const auto original = sorted(both);
  for (std::size_t i = 0; i < original.size(); ++i) CHECK(same_row(swapped[i], original[i]));
  CHECK_FALSE(same_row(rows_for(both, 1)[0], rows_for(both, 2)[0]));
}

TEST_CASE("checkpoint from another scenario is refused") {
  auto cfg = tiny_config();
  const auto sc = tiny_scenario(cfg);
  Trainer t(cfg, sc, 1);
  const auto ck = t.checkpoint();
  cfg.world.seed = 43;
  const auto other = tiny_scenario(cfg);
  CHECK_THROWS_AS(Trainer(ck, other), std::runtime_error);
  CHECK_THROWS_AS(evaluate(ck, other, 1, 0), std::runtime_error);
}

TEST_CASE("ablations") {
  auto cfg = tiny_config();
  cfg.episodes = 1;
  cfg.seeds = {3};
  cfg.ablation = Ablation::kNoPhase1;
  const auto sc = tiny_scenario(cfg);
  Trainer t(cfg, sc, 3);
  CHECK(feasible(t.initial_poses(), cfg));
  const TempDir dir;
  CHECK(train(cfg, sc, dir.str()).rows.size() == 1);
  CHECK(run_label(cfg) == "orchid_no_phase1");

  cfg.ablation = Ablation::kNoRnf;
  cfg.episodes = 6;
  const auto rows = train(cfg, sc, dir.str()).rows;
  for (const auto& r : rows) {
    CHECK_FALSE(r.rnf_triggered);
    CHECK(r.eta_actor == cfg.learn.actor_lr);
  }
  CHECK_FALSE(read_run_manifest(dir.str())->trigger_episodes.at(0).second.has_value());
  cfg.objective = Objective::kProportionalFairness;
  CHECK(run_label(cfg) == "orchid_no_rnf_pf");
}

TEST_CASE("Phase-I placement is feasible and hovers at the initial altitude") {
  const auto cfg = tiny_config();
  const auto sc = tiny_scenario(cfg);
  Trainer t(cfg, sc, 1);
  CHECK(t.initial_poses().size() == 3);
  CHECK(feasible(t.initial_poses(), cfg));
  CHECK(t.baseline_ee() > 0.0);
}

TEST_CASE("static baselines") {
  auto cfg = tiny_config();
  cfg.baseline_draws = 50;
  const auto sc = tiny_scenario(cfg);
  const auto random_rows = baselines::run_baseline(baselines::StaticMethod::kRandom, sc, cfg, 1, 60);
  double nee = 0.0, jfi_random = 0.0;
  for (const auto& r : random_rows) {
    nee += r.nee / 60.0;
    jfi_random += r.jfi_load / 60.0;
    CHECK(r.eta_actor == 0.0);
    CHECK_FALSE(r.rnf_triggered);
  }
  // Self-normalized: a random deployment is worth about one baseline.
  CHECK(nee == doctest::Approx(1.0).epsilon(0.25));

  const auto km = baselines::run_baseline(baselines::StaticMethod::kKMeans, sc, cfg, 1, 5);
  CHECK(km[0].nee == km[4].nee);
  CHECK(km[0].coverage_pct > 0.0);

  CHECK(baselines::to_string(baselines::StaticMethod::kKMeans) == "static_kmeans");
  CHECK(baselines::static_method_from_string("static_random") == baselines::StaticMethod::kRandom);
  CHECK_THROWS_AS(baselines::static_method_from_string("hover"), ConfigError);
}

TEST_CASE("random feasible poses") {
  const auto cfg = tiny_config();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) CHECK(feasible(baselines::random_feasible_poses(cfg.world, cfg.env, rng), cfg));
}

TEST_CASE("deterministic evaluation") {
  const auto cfg = tiny_config();
  const auto sc = tiny_scenario(cfg);
  Trainer t(cfg, sc, 1);
  for (int e = 0; e < 2; ++e) t.run_episode();
  const auto ck = t.checkpoint();
  const auto a = evaluate(ck, sc, 3, 9);
  const auto b = evaluate(ck, sc, 3, 9);
  REQUIRE(a.episodes.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(a.episodes[i].nee == b.episodes[i].nee);
  CHECK(a.summary.at("nee").mean == b.summary.at("nee").mean);
  CHECK(a.summary.count("coverage_pct") == 1);
  std::ostringstream trace;
  evaluate(ck, sc, 1, 9, &trace);
  const std::string text = trace.str();
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        cfg.env.steps_per_episode * cfg.world.num_uavs);
}

TEST_CASE("a zero-mean policy is the static hold") {
  const auto cfg = tiny_config();
  const auto sc = tiny_scenario(cfg);
  Trainer t(cfg, sc, 1);
  auto actor = t.actor();
  for (std::size_t i = 0; i + 1 < actor.params.size(); ++i) actor.params[i].setZero();
  const auto eval = evaluate_policy(actor, cfg, sc, t.initial_poses(), t.baseline_ee(), 2, 5);
  env::CoverageEnv env(sc, cfg.channel, cfg.env);
  for (int e = 1; e <= 2; ++e) {
    const auto m = baselines::run_static_episode(env, t.initial_poses(),
                                                 derive_seed(5, Stream::kEvaluation, e), t.baseline_ee());
    CHECK(m.nee == eval.episodes[e - 1].nee);
    CHECK(m.jfi_rate_avg == eval.episodes[e - 1].jfi_rate_avg);
  }
}

TEST_CASE("figure export") {
  auto cfg = tiny_config();
  cfg.episodes = 3;
  const auto sc = tiny_scenario(cfg);
  const TempDir runs, out;
  train(cfg, sc, runs / "orchid");
  const auto km = baselines::run_baseline(baselines::StaticMethod::kKMeans, sc, cfg, 1, 3);
  fs::create_directories(runs / "km");
  write_run_log(runs / "km/log.csv", km);
  write_run_manifest(runs / "km", "static_kmeans", cfg, scenario_fingerprint(sc), {{1, std::nullopt}});

  const auto summary = export_figures(runs.str(), out.str());
  CHECK(summary.runs == 2);
  const auto tidy = lines(out / "tidy_runs.csv");
  CHECK(tidy[0] == "method,seed,episode,metric,value");
  CHECK(tidy.size() == 1 + (6 + 3) * 8);
  const auto sum = lines(out / "summary_last100.csv");
  CHECK(sum[0] == "method,seed,metric,mean,std,episodes");
  CHECK(sum.size() == 1 + 3 * 8);
  const auto events = lines(out / "rnf_events.csv");
  CHECK(events[0] == "method,seed,trigger_episode");
  CHECK(events.size() == 4);

  fs::create_directories(runs / "km2");
  fs::copy_file(runs / "km/log.csv", runs / "km2/log.csv");
  fs::copy_file(runs / "km/manifest.json", runs / "km2/manifest.json");
  CHECK_THROWS_AS(export_figures(runs.str(), out.str()), std::runtime_error);
}
