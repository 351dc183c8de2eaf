#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace orchid::learn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Ordered list of parameter tensors. Gradients and optimizer moments use
// the same layout as the parameters they belong to.
using ParamSet = std::vector<Matrix>;

ParamSet zeros_like(const ParamSet& params);
std::size_t parameter_count(const ParamSet& params);
Vector flatten(const ParamSet& params);
void unflatten(const Vector& flat, ParamSet& params);
bool all_finite(const ParamSet& params);

// Fully connected ReLU network. Samples are columns. Dense layer l owns
// tensors 2l (weights, out x in) and 2l+1 (bias, out x 1); the output
// layer is linear.
class Mlp {
 public:
  struct Trace {
    std::vector<Matrix> inputs;  // input of each dense layer
    std::vector<Matrix> pre;     // pre-activation of each dense layer
  };

  Mlp() = default;
  explicit Mlp(std::vector<int> layer_sizes);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  std::size_t tensor_count() const { return 2 * static_cast<std::size_t>(num_layers()); }
  const std::vector<int>& sizes() const { return sizes_; }

  ParamSet zero_params() const;
  // Orthogonal initialization; `head_gain` scales the output layer.
  ParamSet init_params(std::mt19937_64& rng, double hidden_gain, double head_gain) const;

  Matrix forward(std::span<const Matrix> params, const Matrix& x) const;
  Matrix forward(std::span<const Matrix> params, const Matrix& x, Trace& trace) const;

  // Accumulates dL/dparams for dL/doutput = grad_out into `grads`.
  void backward(std::span<const Matrix> params, const Trace& trace, const Matrix& grad_out,
                std::span<Matrix> grads) const;

 private:
  void check_shapes(std::span<const Matrix> params, const Matrix& x) const;

  std::vector<int> sizes_;
};

// Random matrix with orthonormal rows or columns, scaled by `gain`.
Matrix orthogonal_matrix(int rows, int cols, double gain, std::mt19937_64& rng);

}  // namespace orchid::learn
