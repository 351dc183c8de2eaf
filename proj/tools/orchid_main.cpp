#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orchid/baselines.hpp"
#include "orchid/checkpoint.hpp"
#include "orchid/config.hpp"
#include "orchid/errors.hpp"
#include "orchid/evaluate.hpp"
#include "orchid/export.hpp"
#include "orchid/scenario.hpp"
#include "orchid/trainer.hpp"

namespace fs = std::filesystem;
using namespace orchid;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kNumericAbort = 3 };

RunConfig config_or_default(const std::string& path) {
  return path.empty() ? RunConfig{} : load_run_config(path);
}

Scenario scenario_for(const RunConfig& config, const std::string& override_path) {
  const std::string& path = override_path.empty() ? config.scenario_path : override_path;
  if (path.empty()) return generate_scenario(config.world);
  if (!fs::exists(path)) throw ConfigError("scenario file not found: " + path);
  return load_scenario(path);
}

void print_summary(const EvaluationResult& r, std::ostream& out) {
  out << std::fixed << std::setprecision(4);
  for (const auto& [name, s] : r.summary) {
    out << std::left << std::setw(14) << name << s.mean << " +/- " << s.std << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage multi-UAV coverage orchestration"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string scenario_path;

  auto* generate_cmd = app.add_subcommand("generate", "Draw a clustered user scenario");
  std::optional<std::uint64_t> gen_seed;
  generate_cmd->add_option("--config", config_path, "JSON run config");
  generate_cmd->add_option("--seed", gen_seed, "Scenario seed (overrides world.seed)");
  generate_cmd->add_option("--out", out_path, "Scenario JSON to write")->required();

  auto* train_cmd = app.add_subcommand("train", "Train with Phase-I initialization and MAPPO");
  std::string resume_path;
  std::optional<int> force_trigger;
  std::optional<int> episodes;
  std::vector<std::uint64_t> seeds;
  std::string ablation;
  std::string objective;
  train_cmd->add_option("--config", config_path, "JSON run config");
  train_cmd->add_option("--out", out_path, "Run directory")->required();
  train_cmd->add_option("--scenario", scenario_path, "Scenario JSON (default: config or generated)");
  train_cmd->add_option("--resume", resume_path, "Continue the seed stored in this checkpoint");
  train_cmd->add_option("--force-trigger-at", force_trigger, "Fire the reset at this episode");
  train_cmd->add_option("--episodes", episodes, "Override the episode budget");
  train_cmd->add_option("--seeds", seeds, "Override the seed list");
  train_cmd->add_option("--ablation", ablation, "none | no_phase1 | no_rnf");
  train_cmd->add_option("--objective", objective, "mmf | pf");

  auto* baseline_cmd = app.add_subcommand("baseline", "Run a static deployment baseline");
  std::string method;
  baseline_cmd->add_option("--method", method, "static_random | static_kmeans")->required();
  baseline_cmd->add_option("--scenario", scenario_path, "Scenario JSON");
  baseline_cmd->add_option("--config", config_path, "JSON run config");
  baseline_cmd->add_option("--out", out_path, "Run directory")->required();
  baseline_cmd->add_option("--episodes", episodes, "Override the episode budget");
  baseline_cmd->add_option("--seeds", seeds, "Override the seed list");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint with deterministic actions");
  std::string checkpoint_path;
  int eval_episodes = 10;
  std::uint64_t eval_seed = 0;
  std::string json_out;
  std::string trace_out;
  eval_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
  eval_cmd->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  eval_cmd->add_option("--episodes", eval_episodes, "Evaluation episodes")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval_seed, "Evaluation seed");
  eval_cmd->add_option("--json", json_out, "Write the aggregate as JSON");
  eval_cmd->add_option("--trace", trace_out, "Write per-step poses as CSV");

  auto* export_cmd = app.add_subcommand("export-figures", "Write tidy CSVs for plotting");
  std::string runs_dir;
  export_cmd->add_option("--runs", runs_dir, "Directory of run directories")->required();
  export_cmd->add_option("--out", out_path, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*generate_cmd) {
      RunConfig config = config_or_default(config_path);
      if (gen_seed) config.world.seed = *gen_seed;
      config.world.validate();
      const Scenario s = generate_scenario(config.world);
      save_scenario(s, out_path);
      std::cout << "scenario " << scenario_fingerprint(s) << ": " << s.users.size() << " users, "
                << s.uav_users.size() << " served by UAVs -> " << out_path << '\n';
    } else if (*train_cmd) {
      if (!resume_path.empty()) {
        const Checkpoint c = load_checkpoint(resume_path);
        const Scenario s = scenario_for(c.config, scenario_path);
        const auto r = resume_training(resume_path, s, out_path, &std::cout);
        std::cout << "resumed seed " << c.seed << " at episode " << c.episode << ", wrote "
                  << r.rows.size() << " rows\n";
        return kOk;
      }
      RunConfig config = config_or_default(config_path);
      if (force_trigger) config.rnf.force_trigger_at = *force_trigger;
      if (episodes) config.episodes = *episodes;
      if (!seeds.empty()) config.seeds = seeds;
      if (!ablation.empty()) config.ablation = ablation_from_string(ablation);
      if (!objective.empty()) {
        config.objective = objective_from_string(objective);
        config.env.objective = config.objective;
      }
      config.validate();
      const Scenario s = scenario_for(config, scenario_path);
      const auto r = train(config, s, out_path, &std::cout);
      for (const auto& [seed, e] : r.trigger_episodes) {
        std::cout << "seed " << seed << ": reset "
                  << (e ? "at episode " + std::to_string(*e) : std::string("not triggered"))
                  << '\n';
      }
    } else if (*baseline_cmd) {
      RunConfig config = config_or_default(config_path);
      if (episodes) config.episodes = *episodes;
      if (!seeds.empty()) config.seeds = seeds;
      config.validate();
      const auto m = baselines::static_method_from_string(method);
      const Scenario s = scenario_for(config, scenario_path);
      fs::create_directories(out_path);
      std::vector<LogRow> rows;
      TriggerList triggers;
      for (const auto seed : config.seeds) {
        const auto seed_rows = baselines::run_baseline(m, s, config, seed, config.episodes);
        rows.insert(rows.end(), seed_rows.begin(), seed_rows.end());
        triggers.emplace_back(seed, std::nullopt);
      }
      write_run_log((fs::path(out_path) / "log.csv").string(), rows);
      config.method = std::string(baselines::to_string(m));
      write_run_manifest(out_path, config.method, config, scenario_fingerprint(s), triggers);
      std::cout << "wrote " << rows.size() << " rows to " << out_path << '\n';
    } else if (*eval_cmd) {
      const Checkpoint c = load_checkpoint(checkpoint_path);
      const Scenario s = load_scenario(scenario_path);
      std::ofstream trace;
      if (!trace_out.empty()) {
        trace.open(trace_out);
        trace << "episode,t,uav,x,y,z,power_mw,load\n";
      }
      const auto r = evaluate(c, s, eval_episodes, eval_seed, trace_out.empty() ? nullptr : &trace);
      print_summary(r, std::cout);
      if (!json_out.empty()) {
        nlohmann::json j;
        j["episodes"] = eval_episodes;
        for (const auto& [name, m] : r.summary) j["metrics"][name] = {{"mean", m.mean}, {"std", m.std}};
        std::ofstream(json_out) << j.dump(2) << '\n';
      }
    } else if (*export_cmd) {
      const auto r = export_figures(runs_dir, out_path);
      std::cout << "exported " << r.runs << " runs, " << r.tidy_rows << " tidy rows to "
                << out_path << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericAbort& e) {
    std::cerr << "numeric abort: " << e.what() << '\n';
    return kNumericAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
