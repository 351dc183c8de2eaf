#pragma once

#include <random>

#include "orchid/mlp.hpp"

namespace orchid::learn {

// Values fed through tanh are clamped to this magnitude before inversion.
inline constexpr double kSquashLimit = 1.0 - 1e-6;

// Gaussian policy over pre-squash actions; executed actions are tanh(u).
// The last tensor of `params` is the state-independent log-std (A x 1).
struct Actor {
  Mlp net;
  ParamSet params;

  int action_dim() const { return net.output_dim(); }
  int input_dim() const { return net.input_dim(); }
  const Matrix& log_std() const { return params.back(); }
};

// Centralized value function over the global state.
struct Critic {
  Mlp net;
  ParamSet params;

  int input_dim() const { return net.input_dim(); }
};

Actor make_actor(int input_dim, int hidden_units, int hidden_layers, int action_dim,
                 double init_log_std, std::mt19937_64& rng);
Critic make_critic(int input_dim, int hidden_units, int hidden_layers, std::mt19937_64& rng);

struct PolicyOutput {
  Matrix mean;     // A x B
  Vector log_std;  // A
};

// Deterministic forward pass; throws std::invalid_argument on shape mismatch.
PolicyOutput policy_forward(const Actor& actor, const Matrix& obs);

Vector value_forward(const Critic& critic, const Matrix& states);

struct SampledAction {
  Vector pre_squash;  // u ~ N(mean, std)
  Vector action;      // tanh(u)
  double log_prob_gaussian = 0.0;
  double log_prob = 0.0;  // density of tanh(u), change of variables included
};

SampledAction sample_action(const Vector& mean, const Vector& log_std, std::mt19937_64& rng);

double gaussian_log_prob(const Vector& u, const Vector& mean, const Vector& log_std);

// Log-density of a squashed action a in (-1, 1)^A.
double squashed_log_prob(const Vector& action, const Vector& mean, const Vector& log_std);

// Entropy of the pre-squash Gaussian.
double gaussian_entropy(const Vector& log_std);

struct ActorMinibatch {
  const Matrix& obs;         // input_dim x B
  const Matrix& pre_squash;  // A x B
  const Vector& old_log_prob;
  const Vector& advantages;
};

struct ActorLossStats {
  double loss = 0.0;
  double surrogate = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
};

// Clipped surrogate plus entropy bonus, negated for minimization:
//   L = -mean(min(rho A, clip(rho, 1-eps, 1+eps) A)) - entropy_coef * H.
// When `grads` is non-null it receives dL/dparams (overwritten).
ActorLossStats actor_loss(const Actor& actor, const ActorMinibatch& batch, double clip_eps,
                          double entropy_coef, ParamSet* grads);

// Mean squared error to the returns. When `grads` is non-null it receives
// dL/dparams (overwritten).
double critic_loss(const Critic& critic, const Matrix& states, const Vector& returns,
                   ParamSet* grads);

}  // namespace orchid::learn
