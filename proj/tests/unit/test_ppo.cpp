#include <doctest.h>

#include <cmath>
#include <limits>

#include "learn_fixtures.hpp"
#include "orchid/errors.hpp"
#include "orchid/gae.hpp"
#include "orchid/ppo.hpp"

using namespace orchid::learn;
using namespace orchid::testing;

namespace {

EpisodeRollout random_episode(std::mt19937_64& rng, int steps, int agents, int obs_dim,
                              int action_dim, int state_dim) {
  auto ep = EpisodeRollout::allocate(steps, agents, obs_dim, action_dim, state_dim);
  ep.actor_inputs = random_matrix(obs_dim, steps * agents, rng);
  ep.pre_squash = random_matrix(action_dim, steps * agents, rng, 0.3);
  ep.log_probs = random_matrix(steps * agents, 1, rng).col(0);
  ep.rewards = random_matrix(steps * agents, 1, rng).col(0);
  ep.states = random_matrix(state_dim, steps, rng);
  ep.values = random_matrix(steps + 1, 1, rng).col(0);
  return ep;
}

RolloutBatch on_policy_batch(const Actor& actor, std::mt19937_64& rng, int size, int state_dim) {
  RolloutBatch b;
  b.obs = random_matrix(actor.input_dim(), size, rng);
  b.states = random_matrix(state_dim, size, rng);
  const auto out = policy_forward(actor, b.obs);
  b.pre_squash.resize(actor.action_dim(), size);
  b.old_log_prob.resize(size);
  for (int i = 0; i < size; ++i) {
    const auto s = sample_action(out.mean.col(i), out.log_std, rng);
    b.pre_squash.col(i) = s.pre_squash;
    b.old_log_prob[i] = s.log_prob_gaussian;
  }
  b.advantages = random_matrix(size, 1, rng).col(0);
  b.returns = random_matrix(size, 1, rng).col(0);
  return b;
}

}  // namespace

TEST_CASE("advantage normalization") {
  Vector a(4);
  a << 1.0, 2.0, 3.0, 4.0;
  const Vector n = normalize_advantages(a);
  CHECK(std::abs(n.mean()) < 1e-15);
  CHECK(std::sqrt(n.squaredNorm() / 4.0) == doctest::Approx(1.0).epsilon(1e-14));
  const Vector c = Vector::Constant(5, 3.0);
  CHECK(normalize_advantages(c) == c);
}

TEST_CASE("assemble runs GAE per agent over the shared values") {
  std::mt19937_64 rng(3);
  RolloutBuffer buffer;
  buffer.add(random_episode(rng, 6, 3, 4, 2, 5));
  buffer.add(random_episode(rng, 4, 3, 4, 2, 5));
  const auto batch = buffer.assemble(0.9, 0.8);
  CHECK(batch.size() == (6 + 4) * 3);
  Eigen::Index offset = 0;
  for (const auto& ep : buffer.data()) {
    const std::vector<double> values(ep.values.data(), ep.values.data() + ep.values.size());
    for (int n = 0; n < ep.agents; ++n) {
      std::vector<double> r(ep.steps);
      for (int t = 0; t < ep.steps; ++t) r[t] = ep.rewards[ep.column(t, n)];
      const auto ref = gae(r, values, 0.9, 0.8);
      for (int t = 0; t < ep.steps; ++t) {
        const Eigen::Index c = offset + ep.column(t, n);
        CHECK(batch.advantages[c] == ref.advantages[t]);
        CHECK(batch.returns[c] == ref.returns[t]);
        CHECK(batch.states.col(c) == ep.states.col(t));
        CHECK(batch.obs.col(c) == ep.actor_inputs.col(ep.column(t, n)));
      }
    }
    offset += static_cast<Eigen::Index>(ep.steps) * ep.agents;
  }
}

TEST_CASE("minibatch count and optimizer steps") {
  std::mt19937_64 rng(4);
  Actor actor = make_actor(6, 16, 1, 2, -0.5, rng);
  Critic critic = make_critic(5, 16, 1, rng);
  auto ao = make_optimizer(actor.params, 1e-4);
  auto co = make_optimizer(critic.params, 1e-3);
  const auto batch = on_policy_batch(actor, rng, 300, 5);
  PpoConfig cfg;
  cfg.epochs = 3;
  cfg.minibatch_size = 128;
  const auto stats = ppo_update(actor, critic, batch, cfg, ao, co, rng);
  CHECK(stats.minibatches == 9);
  CHECK(ao.step == 9);
  CHECK(co.step == 9);
  CHECK(std::isfinite(stats.actor_loss));
  CHECK(stats.critic_loss > 0.0);
}

TEST_CASE("update is reproducible from the same generator state") {
  std::mt19937_64 rng(5);
  const Actor actor0 = make_actor(6, 16, 1, 2, -0.5, rng);
  const Critic critic0 = make_critic(5, 16, 1, rng);
  const auto batch = on_policy_batch(actor0, rng, 200, 5);
  auto run = [&] {
    Actor a = actor0;
    Critic c = critic0;
    auto ao = make_optimizer(a.params, 1e-3);
    auto co = make_optimizer(c.params, 1e-3);
    std::mt19937_64 r(77);
    ppo_update(a, c, batch, PpoConfig{}, ao, co, r);
    return flatten(a.params);
  };
  CHECK(run() == run());
}

TEST_CASE("non-finite data aborts the update") {
  std::mt19937_64 rng(6);
  Actor actor = make_actor(6, 8, 1, 2, -0.5, rng);
  Critic critic = make_critic(5, 8, 1, rng);
  auto ao = make_optimizer(actor.params, 1e-4);
  auto co = make_optimizer(critic.params, 1e-3);
  auto batch = on_policy_batch(actor, rng, 64, 5);
  batch.returns[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ppo_update(actor, critic, batch, PpoConfig{}, ao, co, rng), orchid::NumericAbort);
}

TEST_CASE("log-std is clamped after each step") {
  std::mt19937_64 rng(7);
  Actor actor = make_actor(6, 8, 1, 2, 1.99, rng);
  Critic critic = make_critic(5, 8, 1, rng);
  auto ao = make_optimizer(actor.params, 0.5);
  auto co = make_optimizer(critic.params, 1e-3);
  auto batch = on_policy_batch(actor, rng, 64, 5);
  batch.advantages.setZero();
  PpoConfig cfg;
  cfg.entropy_coef = 1.0;
  ppo_update(actor, critic, batch, cfg, ao, co, rng);
  CHECK((actor.log_std().array() <= cfg.log_std_max).all());
  CHECK(actor.log_std().maxCoeff() == cfg.log_std_max);
}
