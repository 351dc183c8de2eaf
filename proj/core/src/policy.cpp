#include "orchid/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace orchid::learn {
namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // 0.5 * log(2 pi)

std::vector<int> layer_sizes(int input_dim, int hidden_units, int hidden_layers, int output_dim) {
  std::vector<int> sizes{input_dim};
  for (int l = 0; l < hidden_layers; ++l) sizes.push_back(hidden_units);
  sizes.push_back(output_dim);
  return sizes;
}

}  // namespace

Actor make_actor(int input_dim, int hidden_units, int hidden_layers, int action_dim,
                 double init_log_std, std::mt19937_64& rng) {
  Actor actor;
  actor.net = Mlp(layer_sizes(input_dim, hidden_units, hidden_layers, action_dim));
  actor.params = actor.net.init_params(rng, std::numbers::sqrt2, 0.01);
  actor.params.push_back(Matrix::Constant(action_dim, 1, init_log_std));
  return actor;
}

Critic make_critic(int input_dim, int hidden_units, int hidden_layers, std::mt19937_64& rng) {
  Critic critic;
  critic.net = Mlp(layer_sizes(input_dim, hidden_units, hidden_layers, 1));
  critic.params = critic.net.init_params(rng, std::numbers::sqrt2, 1.0);
  return critic;
}

PolicyOutput policy_forward(const Actor& actor, const Matrix& obs) {
  if (actor.params.size() != actor.net.tensor_count() + 1) {
    throw std::invalid_argument("policy_forward: actor is missing its log-std tensor");
  }
  PolicyOutput out;
  out.mean = actor.net.forward(actor.params, obs);
  out.log_std = actor.log_std().col(0);
  return out;
}

Vector value_forward(const Critic& critic, const Matrix& states) {
  return critic.net.forward(critic.params, states).row(0).transpose();
}

double gaussian_log_prob(const Vector& u, const Vector& mean, const Vector& log_std) {
  double lp = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double z = (u[j] - mean[j]) * std::exp(-log_std[j]);
    lp += -0.5 * z * z - log_std[j] - kLogSqrtTwoPi;
  }
  return lp;
}

double squashed_log_prob(const Vector& action, const Vector& mean, const Vector& log_std) {
  double lp = 0.0;
  Vector u(action.size());
  for (Eigen::Index j = 0; j < action.size(); ++j) {
    const double a = std::clamp(action[j], -kSquashLimit, kSquashLimit);
    u[j] = std::atanh(a);
    lp -= std::log(1.0 - a * a);
  }
  return lp + gaussian_log_prob(u, mean, log_std);
}

double gaussian_entropy(const Vector& log_std) {
  return (log_std.array() + 0.5 + kLogSqrtTwoPi).sum();
}

SampledAction sample_action(const Vector& mean, const Vector& log_std, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SampledAction s;
  s.pre_squash.resize(mean.size());
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    s.pre_squash[j] = mean[j] + std::exp(log_std[j]) * normal(rng);
  }
  s.action = s.pre_squash.array().tanh().matrix();
  s.log_prob_gaussian = gaussian_log_prob(s.pre_squash, mean, log_std);
  s.log_prob = squashed_log_prob(s.action, mean, log_std);
  return s;
}

ActorLossStats actor_loss(const Actor& actor, const ActorMinibatch& batch, double clip_eps,
                          double entropy_coef, ParamSet* grads) {
  const Eigen::Index n = batch.obs.cols();
  if (n == 0) throw std::invalid_argument("actor_loss: empty minibatch");
  Mlp::Trace trace;
  const Matrix mean = actor.net.forward(actor.params, batch.obs, trace);
  const Vector log_std = actor.log_std().col(0);
  const Vector inv_var = (-2.0 * log_std.array()).exp().matrix();
  const double inv_n = 1.0 / static_cast<double>(n);

  ActorLossStats stats;
  Matrix d_mean = Matrix::Zero(mean.rows(), n);
  Vector d_log_std = Vector::Zero(log_std.size());
  double surrogate = 0.0;
  int clipped = 0;
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector u = batch.pre_squash.col(i);
    const Vector mu = mean.col(i);
    const double log_prob = gaussian_log_prob(u, mu, log_std);
    const double log_ratio = log_prob - batch.old_log_prob[i];
    const double ratio = std::exp(log_ratio);
    const double adv = batch.advantages[i];
    const double unclipped = ratio * adv;
    const double clipped_ratio = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
    const double clipped_term = clipped_ratio * adv;
    const bool use_unclipped = unclipped <= clipped_term;
    surrogate += use_unclipped ? unclipped : clipped_term;
    if (ratio != clipped_ratio) ++clipped;
    kl += (ratio - 1.0) - log_ratio;

    if (grads != nullptr && use_unclipped) {
      // dL/dlogp for this sample; dlogp/dmu = (u - mu)/sigma^2,
      // dlogp/dlog_std = z^2 - 1.
      const double g = -inv_n * unclipped;
      const Vector diff = u - mu;
      d_mean.col(i) = g * diff.cwiseProduct(inv_var);
      d_log_std.array() += g * (diff.array().square() * inv_var.array() - 1.0);
    }
  }
  stats.surrogate = surrogate * inv_n;
  stats.entropy = gaussian_entropy(log_std);
  stats.loss = -stats.surrogate - entropy_coef * stats.entropy;
  stats.clip_fraction = static_cast<double>(clipped) * inv_n;
  stats.approx_kl = kl * inv_n;

  if (grads != nullptr) {
    *grads = zeros_like(actor.params);
    actor.net.backward(actor.params, trace, d_mean,
                       std::span<Matrix>(grads->data(), actor.net.tensor_count()));
    grads->back().col(0) = d_log_std - Vector::Constant(log_std.size(), entropy_coef);
  }
  return stats;
}

double critic_loss(const Critic& critic, const Matrix& states, const Vector& returns,
                   ParamSet* grads) {
  const Eigen::Index n = states.cols();
  if (n == 0) throw std::invalid_argument("critic_loss: empty minibatch");
  Mlp::Trace trace;
  const Matrix values = critic.net.forward(critic.params, states, trace);
  const Vector diff = values.row(0).transpose() - returns;
  const double loss = diff.squaredNorm() / static_cast<double>(n);
  if (grads != nullptr) {
    *grads = zeros_like(critic.params);
    const Matrix d_out = (2.0 / static_cast<double>(n)) * diff.transpose();
    critic.net.backward(critic.params, trace, d_out, *grads);
  }
  return loss;
}

}  // namespace orchid::learn
