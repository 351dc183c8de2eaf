#include "orchid/mlp.hpp"

#include <stdexcept>
#include <string>

namespace orchid::learn {

ParamSet zeros_like(const ParamSet& params) {
  ParamSet out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(Matrix::Zero(p.rows(), p.cols()));
  return out;
}

std::size_t parameter_count(const ParamSet& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += static_cast<std::size_t>(p.size());
  return n;
}

Vector flatten(const ParamSet& params) {
  Vector flat(static_cast<Eigen::Index>(parameter_count(params)));
  Eigen::Index offset = 0;
  for (const auto& p : params) {
    flat.segment(offset, p.size()) = p.reshaped();
    offset += p.size();
  }
  return flat;
}

void unflatten(const Vector& flat, ParamSet& params) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count(params)) {
    throw std::invalid_argument("unflatten: size mismatch");
  }
  Eigen::Index offset = 0;
  for (auto& p : params) {
    p.reshaped() = flat.segment(offset, p.size());
    offset += p.size();
  }
}

bool all_finite(const ParamSet& params) {
  for (const auto& p : params) {
    if (!p.allFinite()) return false;
  }
  return true;
}

Matrix orthogonal_matrix(int rows, int cols, double gain, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool tall = rows >= cols;
  const int r = tall ? rows : cols;
  const int c = tall ? cols : rows;
  Matrix a(r, c);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(r, c);
  const Matrix rmat = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
  for (int j = 0; j < c; ++j) {
    if (rmat(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  Matrix out = tall ? q : Matrix(q.transpose());
  return gain * out;
}

Mlp::Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need input and output sizes");
  for (int s : sizes_) {
    if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be positive");
  }
}

ParamSet Mlp::zero_params() const {
  ParamSet params;
  for (int l = 0; l < num_layers(); ++l) {
    params.push_back(Matrix::Zero(sizes_[l + 1], sizes_[l]));
    params.push_back(Matrix::Zero(sizes_[l + 1], 1));
  }
  return params;
}

ParamSet Mlp::init_params(std::mt19937_64& rng, double hidden_gain, double head_gain) const {
  ParamSet params;
  for (int l = 0; l < num_layers(); ++l) {
    const double gain = l + 1 == num_layers() ? head_gain : hidden_gain;
    params.push_back(orthogonal_matrix(sizes_[l + 1], sizes_[l], gain, rng));
    params.push_back(Matrix::Zero(sizes_[l + 1], 1));
  }
  return params;
}

void Mlp::check_shapes(std::span<const Matrix> params, const Matrix& x) const {
  if (params.size() < tensor_count()) throw std::invalid_argument("Mlp: missing parameter tensors");
  if (x.rows() != input_dim()) {
    throw std::invalid_argument("Mlp: input has " + std::to_string(x.rows()) +
                                " rows, expected " + std::to_string(input_dim()));
  }
  for (int l = 0; l < num_layers(); ++l) {
    const auto& w = params[2 * static_cast<std::size_t>(l)];
    const auto& b = params[2 * static_cast<std::size_t>(l) + 1];
    if (w.rows() != sizes_[l + 1] || w.cols() != sizes_[l] || b.rows() != sizes_[l + 1] ||
        b.cols() != 1) {
      throw std::invalid_argument("Mlp: parameter shape mismatch at layer " + std::to_string(l));
    }
  }
}

Matrix Mlp::forward(std::span<const Matrix> params, const Matrix& x) const {
  check_shapes(params, x);
  Matrix h = x;
  for (int l = 0; l < num_layers(); ++l) {
    const auto& w = params[2 * static_cast<std::size_t>(l)];
    const auto& b = params[2 * static_cast<std::size_t>(l) + 1];
    Matrix z = w * h;
    z.colwise() += b.col(0);
    if (l + 1 < num_layers()) {
      h = z.cwiseMax(0.0);
    } else {
      h = std::move(z);
    }
  }
  return h;
}

Matrix Mlp::forward(std::span<const Matrix> params, const Matrix& x, Trace& trace) const {
  check_shapes(params, x);
  trace.inputs.resize(static_cast<std::size_t>(num_layers()));
  trace.pre.resize(static_cast<std::size_t>(num_layers()));
  Matrix h = x;
  for (int l = 0; l < num_layers(); ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const auto& w = params[2 * ul];
    const auto& b = params[2 * ul + 1];
    trace.inputs[ul] = h;
    Matrix z = w * h;
    z.colwise() += b.col(0);
    trace.pre[ul] = z;
    h = l + 1 < num_layers() ? Matrix(z.cwiseMax(0.0)) : z;
  }
  return h;
}

void Mlp::backward(std::span<const Matrix> params, const Trace& trace, const Matrix& grad_out,
                   std::span<Matrix> grads) const {
  Matrix g = grad_out;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const auto ul = static_cast<std::size_t>(l);
    grads[2 * ul].noalias() += g * trace.inputs[ul].transpose();
    grads[2 * ul + 1].col(0) += g.rowwise().sum();
    if (l > 0) {
      Matrix upstream = params[2 * ul].transpose() * g;
      g = upstream.cwiseProduct((trace.pre[ul - 1].array() > 0.0).cast<double>().matrix());
    }
  }
}

}  // namespace orchid::learn
