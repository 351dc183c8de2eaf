#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "orchid/mlp.hpp"

namespace orchid::testing {

using learn::Matrix;
using learn::ParamSet;
using learn::Vector;

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                            double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

inline void randomize(ParamSet& params, std::mt19937_64& rng, double scale) {
  for (auto& p : params) p = random_matrix(p.rows(), p.cols(), rng, scale);
}

// Largest relative error between analytic gradients and central finite
// differences of `loss`. Entries where both magnitudes are below `floor`
// are compared in absolute terms against the floor.
inline double max_gradient_error(ParamSet& params, const ParamSet& analytic,
                                 const std::function<double()>& loss, double h = 1e-5,
                                 double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (Eigen::Index i = 0; i < params[t].size(); ++i) {
      double& w = params[t].data()[i];
      const double saved = w;
      w = saved + h;
      const double up = loss();
      w = saved - h;
      const double down = loss();
      w = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double exact = analytic[t].data()[i];
      const double scale = std::max({std::abs(numeric), std::abs(exact), floor});
      worst = std::max(worst, std::abs(numeric - exact) / scale);
    }
  }
  return worst;
}

}  // namespace orchid::testing
