#include "orchid/trainer.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "orchid/baselines.hpp"
#include "orchid/errors.hpp"
#include "orchid/export.hpp"
#include "orchid/seeding.hpp"

namespace orchid {

namespace fs = std::filesystem;
using learn::Matrix;
using learn::Vector;

int actor_input_dim(int num_agents) { return env::kObsDim + num_agents; }

Matrix actor_inputs(const std::vector<env::Observation>& observations) {
  const int n = static_cast<int>(observations.size());
  Matrix x = Matrix::Zero(actor_input_dim(n), n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < env::kObsDim; ++k) x(k, i) = observations[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    x(env::kObsDim + i, i) = 1.0;
  }
  return x;
}

learn::PpoConfig ppo_config(const LearnParams& l) {
  learn::PpoConfig c;
  c.clip_eps = l.clip_eps;
  c.entropy_coef = l.entropy_coef;
  c.epochs = l.epochs;
  c.minibatch_size = l.minibatch_size;
  c.log_std_min = l.log_std_min;
  c.log_std_max = l.log_std_max;
  c.adam = {l.adam_beta1, l.adam_beta2, l.adam_eps};
  return c;
}

namespace {

std::vector<Vec3> initial_poses_for(const RunConfig& config, const Scenario& scenario,
                                    std::uint64_t seed) {
  if (config.ablation == Ablation::kNoPhase1) {
    std::mt19937_64 rng(derive_seed(seed, Stream::kRandomPoses));
    return baselines::random_feasible_poses(scenario.config, config.env, rng);
  }
  std::mt19937_64 rng(derive_seed(seed, Stream::kPhase1));
  return baselines::phase1_poses(scenario, config.env, config.clustering_restarts, rng);
}

}  // namespace

Trainer::Trainer(RunConfig config, const Scenario& scenario, std::uint64_t seed)
    : config_(std::move(config)),
      seed_(seed),
      fingerprint_(scenario_fingerprint(scenario)),
      env_(scenario, config_.channel, config_.env),
      rng_(derive_seed(seed, Stream::kSampling)),
      rnf_(config_.rnf, config_.ablation != Ablation::kNoRnf) {
  config_.validate();
  poses_ = initial_poses_for(config_, scenario, seed);
  baseline_ee_ = baselines::random_baseline_ee(scenario, config_.channel, config_.env,
                                               config_.baseline_draws);
  const auto& l = config_.learn;
  std::mt19937_64 init_rng(derive_seed(seed, Stream::kPolicyInit));
  actor_ = learn::make_actor(actor_input_dim(env_.num_agents()), l.hidden_units, l.hidden_layers,
                             env::kActionDim, l.init_log_std, init_rng);
  critic_ = learn::make_critic(env_.state_dim(), l.hidden_units, l.hidden_layers, init_rng);
  actor_opt_ = learn::make_optimizer(actor_.params, l.actor_lr);
  critic_opt_ = learn::make_optimizer(critic_.params, l.critic_lr);
}

Trainer::Trainer(const Checkpoint& c, const Scenario& scenario)
    : config_(c.config),
      seed_(c.seed),
      fingerprint_(scenario_fingerprint(scenario)),
      env_(scenario, c.config.channel, c.config.env),
      poses_(c.initial_poses),
      baseline_ee_(c.baseline_ee),
      actor_(c.actor),
      critic_(c.critic),
      actor_opt_(c.actor_opt),
      critic_opt_(c.critic_opt),
      rnf_(c.rnf),
      episode_(c.episode) {
  if (fingerprint_ != c.scenario_fingerprint) {
    throw std::runtime_error("checkpoint was trained on a different scenario (" +
                             c.scenario_fingerprint + " vs " + fingerprint_ + ")");
  }
  if (actor_.input_dim() != actor_input_dim(env_.num_agents()) ||
      critic_.input_dim() != env_.state_dim()) {
    throw std::runtime_error("checkpoint network shapes do not match the scenario");
  }
  std::istringstream rng_state(c.sampling_rng);
  rng_state >> rng_;
  env_.ee_normalizer().restore(c.ee_norm.lo, c.ee_norm.hi, c.ee_norm.count);
  env_.pf_normalizer().restore(c.pf_norm.lo, c.pf_norm.hi, c.pf_norm.count);
  for (const auto& e : c.pending) buffer_.add(e);
}

LogRow Trainer::run_episode(std::ostream* trace) {
  if (finished()) throw std::logic_error("Trainer: all episodes completed");
  const int e = episode_ + 1;
  const int n_agents = env_.num_agents();
  const int steps = config_.env.steps_per_episode;

  auto out = env_.reset(poses_, derive_seed(seed_, Stream::kEpisode, static_cast<std::uint64_t>(e)));
  auto rollout = learn::EpisodeRollout::allocate(steps, n_agents, actor_input_dim(n_agents),
                                                 env::kActionDim, env_.state_dim());
  Matrix all_states(env_.state_dim(), steps + 1);
  std::vector<env::ActionVector> actions(static_cast<std::size_t>(n_agents));
  metrics::EpisodeAccumulator acc;

  for (int t = 0; t < steps; ++t) {
    const Matrix x = actor_inputs(out.observations);
    all_states.col(t) = Eigen::Map<const Vector>(out.global_state.data(),
                                                 static_cast<Eigen::Index>(out.global_state.size()));
    rollout.actor_inputs.middleCols(rollout.column(t, 0), n_agents) = x;
    const auto policy = learn::policy_forward(actor_, x);
    for (int n = 0; n < n_agents; ++n) {
      const auto s = learn::sample_action(policy.mean.col(n), policy.log_std, rng_);
      rollout.pre_squash.col(rollout.column(t, n)) = s.pre_squash;
      rollout.log_probs[rollout.column(t, n)] = s.log_prob_gaussian;
      for (int k = 0; k < env::kActionDim; ++k) actions[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = s.action[k];
    }
    out = env_.step(actions);
    for (int n = 0; n < n_agents; ++n) {
      rollout.rewards[rollout.column(t, n)] = out.rewards[static_cast<std::size_t>(n)];
    }
    acc.add_step(out.info.covered_fraction, out.info.ee_bits_per_joule, out.info.jfi_load,
                 out.info.jfi_rate, out.info.team_reward);
    if (trace) {
      const auto& st = env_.state();
      for (int n = 0; n < n_agents; ++n) {
        const auto& p = st.positions[static_cast<std::size_t>(n)];
        *trace << seed_ << ',' << e << ',' << t + 1 << ',' << n << ',' << p.x << ',' << p.y << ','
               << p.z << ',' << st.powers_mw[static_cast<std::size_t>(n)] << ','
               << out.info.loads[static_cast<std::size_t>(n)] << '\n';
      }
    }
  }
  all_states.col(steps) = Eigen::Map<const Vector>(
      out.global_state.data(), static_cast<Eigen::Index>(out.global_state.size()));
  rollout.states = all_states.leftCols(steps);
  // The episode ends on a time limit, so the tail bootstraps from V(s_T).
  rollout.values = learn::value_forward(critic_, all_states);
  buffer_.add(std::move(rollout));

  if (static_cast<int>(buffer_.episodes()) >= config_.learn.rollout_episodes) {
    const auto batch = buffer_.assemble(config_.learn.discount, config_.learn.gae_lambda);
    last_update_ = learn::ppo_update(actor_, critic_, batch, ppo_config(config_.learn),
                                     actor_opt_, critic_opt_, rng_);
    buffer_.clear();
  }

  const auto m = acc.finish(baseline_ee_);
  rnf_.update_window(m.jfi_rate_avg);
  triggered_last_ = rnf_.check_trigger(e);
  if (triggered_last_) rnf_.apply_reset(actor_opt_, critic_opt_);
  episode_ = e;

  LogRow row;
  row.seed = seed_;
  row.episode = e;
  row.total_reward = m.total_reward;
  row.nee = m.nee;
  row.jfi_load = m.jfi_load_avg;
  row.jfi_rate = m.jfi_rate_avg;
  row.coverage_pct = 100.0 * m.mean_coverage;
  row.eta_actor = actor_opt_.learning_rate;
  row.eta_critic = critic_opt_.learning_rate;
  row.rnf_triggered = rnf_.triggered();
  return row;
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint c;
  c.config = config_;
  c.seed = seed_;
  c.episode = episode_;
  c.scenario_fingerprint = fingerprint_;
  c.initial_poses = poses_;
  c.baseline_ee = baseline_ee_;
  c.actor = actor_;
  c.critic = critic_;
  c.actor_opt = actor_opt_;
  c.critic_opt = critic_opt_;
  std::ostringstream rng_state;
  rng_state << rng_;
  c.sampling_rng = rng_state.str();
  c.rnf = rnf_;
  c.ee_norm = {env_.ee_normalizer().lo(), env_.ee_normalizer().hi(), env_.ee_normalizer().count()};
  c.pf_norm = {env_.pf_normalizer().lo(), env_.pf_normalizer().hi(), env_.pf_normalizer().count()};
  c.pending = buffer_.data();
  return c;
}

std::string run_label(const RunConfig& config) {
  std::string label = config.method;
  if (config.ablation != Ablation::kNone) label += "_" + std::string(to_string(config.ablation));
  if (config.objective == Objective::kProportionalFairness) label += "_pf";
  return label;
}

std::string checkpoint_path(const std::string& out_dir, std::uint64_t seed, int episode) {
  std::ostringstream name;
  name << "ckpt_e" << std::setw(5) << std::setfill('0') << episode << ".bin";
  return (fs::path(out_dir) / ("seed_" + std::to_string(seed)) / name.str()).string();
}

namespace {

void run_seed(Trainer& trainer, const std::string& out_dir, std::ostream& log,
              TrainResult& result, std::ostream* progress) {
  const auto& config = trainer.config();
  const fs::path seed_dir = fs::path(out_dir) / ("seed_" + std::to_string(trainer.seed()));
  fs::create_directories(seed_dir);
  std::ofstream trace;
  if (config.trace) {
    trace.open(seed_dir / "trace.csv");
    trace << "seed,episode,t,uav,x,y,z,power_mw,load\n";
  }
  try {
    while (!trainer.finished()) {
      const bool last = trainer.episode() + 1 == config.episodes;
      const LogRow row = trainer.run_episode(config.trace && last ? &trace : nullptr);
      result.rows.push_back(row);
      write_run_log_row(log, row);
      log.flush();
      const int e = row.episode;
      if (trainer.triggered_last_episode() ||
          (config.checkpoint_every > 0 && e % config.checkpoint_every == 0)) {
        save_checkpoint(trainer.checkpoint(), checkpoint_path(out_dir, trainer.seed(), e));
      }
      if (progress && (e % 10 == 0 || trainer.triggered_last_episode())) {
        *progress << "seed " << trainer.seed() << " episode " << e << "/" << config.episodes
                  << " nee " << row.nee << " jfi_rate " << row.jfi_rate
                  << (trainer.triggered_last_episode() ? " [R&F triggered]" : "") << std::endl;
      }
    }
  } catch (const NumericAbort&) {
    save_checkpoint(trainer.checkpoint(), (seed_dir / "abort.bin").string());
    throw;
  }
  save_checkpoint(trainer.checkpoint(), (seed_dir / "final.bin").string());
  result.trigger_episodes.emplace_back(trainer.seed(), trainer.rnf().trigger_episode());
}

}  // namespace

TrainResult train(const RunConfig& config, const Scenario& scenario, const std::string& out_dir,
                  std::ostream* progress) {
  config.validate();
  fs::create_directories(out_dir);
  std::ofstream log(fs::path(out_dir) / "log.csv");
  if (!log) throw std::runtime_error("cannot write log in " + out_dir);
  write_run_log_header(log);
  TrainResult result;
  for (const auto seed : config.seeds) {
    Trainer trainer(config, scenario, seed);
    run_seed(trainer, out_dir, log, result, progress);
  }
  write_run_manifest(out_dir, run_label(config), config, scenario_fingerprint(scenario),
                     result.trigger_episodes);
  return result;
}

TrainResult resume_training(const std::string& checkpoint_file, const Scenario& scenario,
                            const std::string& out_dir, std::ostream* progress) {
  const Checkpoint c = load_checkpoint(checkpoint_file);
  Trainer trainer(c, scenario);
  fs::create_directories(out_dir);
  const fs::path log_path = fs::path(out_dir) / "log.csv";
  std::vector<LogRow> kept;
  if (fs::exists(log_path)) {
    for (const auto& r : read_run_log(log_path.string())) {
      if (r.seed != c.seed || r.episode <= c.episode) kept.push_back(r);
    }
  }
  write_run_log(log_path.string(), kept);
  std::ofstream log(log_path, std::ios::app);
  TrainResult result;
  run_seed(trainer, out_dir, log, result, progress);

  std::vector<std::pair<std::uint64_t, std::optional<int>>> triggers;
  const auto previous = read_run_manifest(out_dir);
  if (previous) {
    for (const auto& [seed, e] : previous->trigger_episodes) {
      if (seed != c.seed) triggers.emplace_back(seed, e);
    }
  }
  triggers.insert(triggers.end(), result.trigger_episodes.begin(), result.trigger_episodes.end());
  write_run_manifest(out_dir, run_label(c.config), c.config, scenario_fingerprint(scenario),
                     triggers);
  return result;
}

}  // namespace orchid
