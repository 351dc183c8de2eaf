#include <doctest.h>

#include "learn_fixtures.hpp"
#include "orchid/adam.hpp"

using namespace orchid::learn;
using namespace orchid::testing;

namespace {

ParamSet sample_params(std::mt19937_64& rng) {
  return {random_matrix(4, 3, rng), random_matrix(4, 1, rng)};
}

}  // namespace

TEST_CASE("first step moves each weight by the learning rate against the gradient sign") {
  std::mt19937_64 rng(1);
  ParamSet p = sample_params(rng);
  const ParamSet before = p;
  const ParamSet g = sample_params(rng);
  auto opt = make_optimizer(p, 1e-3);
  adam_step(opt, p, g);
  CHECK(opt.step == 1);
  for (std::size_t t = 0; t < p.size(); ++t) {
    for (Eigen::Index i = 0; i < p[t].size(); ++i) {
      const double gi = g[t].data()[i];
      const double expected = -1e-3 * gi / (std::abs(gi) + 1e-8);
      CHECK(p[t].data()[i] - before[t].data()[i] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("update scales linearly with the learning rate") {
  std::mt19937_64 rng(2);
  const ParamSet start = sample_params(rng);
  std::vector<ParamSet> grads;
  for (int k = 0; k < 5; ++k) grads.push_back(sample_params(rng));
  ParamSet a = start, b = start;
  auto oa = make_optimizer(a, 1e-3);
  auto ob = make_optimizer(b, 1e-4);
  for (const auto& g : grads) {
    adam_step(oa, a, g);
    adam_step(ob, b, g);
  }
  for (std::size_t t = 0; t < a.size(); ++t) {
    const Matrix da = a[t] - start[t], db = b[t] - start[t];
    CHECK((db - 0.1 * da).norm() < 1e-12 * (1.0 + da.norm()));
  }
}

TEST_CASE("zero gradient leaves parameters unchanged") {
  std::mt19937_64 rng(3);
  ParamSet p = sample_params(rng);
  const ParamSet before = p;
  auto opt = make_optimizer(p, 1e-2);
  adam_step(opt, p, zeros_like(p));
  for (std::size_t t = 0; t < p.size(); ++t) CHECK(p[t] == before[t]);
}

TEST_CASE("second moments stay non-negative and reset clears state") {
  std::mt19937_64 rng(4);
  ParamSet p = sample_params(rng);
  auto opt = make_optimizer(p, 1e-3);
  CHECK(opt.moments_are_zero());
  for (int k = 0; k < 20; ++k) adam_step(opt, p, sample_params(rng));
  for (const auto& v : opt.second_moment) CHECK((v.array() >= 0.0).all());
  CHECK_FALSE(opt.moments_are_zero());
  opt.reset_moments();
  CHECK(opt.moments_are_zero());
  CHECK(opt.step == 0);
  CHECK(opt.learning_rate == 1e-3);
  CHECK(opt.initial_learning_rate == 1e-3);
}
