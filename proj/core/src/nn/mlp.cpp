#include "porohom/nn/mlp.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/random.hpp"

#include <cmath>

namespace porohom::nn {

Normalization Normalization::identity(int n) {
  return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
}

Normalization Normalization::fit(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.cols();
  if (n == 0) throw EmptyDataset("cannot fit a normalization to zero samples");
  Normalization out;
  out.mean = x.rowwise().mean();
  out.scale = Eigen::VectorXd::Ones(x.rows());
  if (n > 1) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double var = (x.row(i).array() - out.mean[i]).square().sum() / static_cast<double>(n - 1);
      const double sd = std::sqrt(var);
      if (sd > 1e-12) out.scale[i] = sd;
    }
  }
  return out;
}

MlpModel::MlpModel(int dim, std::vector<int> hidden, Activation activation) : dim_(dim) {
  if (dim != 2 && dim != 3) throw ValidationError("model dimension must be 2 or 3");
  const int n = dim * dim;
  int in = n;
  for (int w : hidden) {
    if (w < 1) throw ValidationError("hidden layer widths must be positive");
    layers_.push_back({Eigen::MatrixXd::Zero(w, in), Eigen::VectorXd::Zero(w), activation});
    in = w;
  }
  layers_.push_back({Eigen::MatrixXd::Zero(n, in), Eigen::VectorXd::Zero(n), Activation::identity});
  input_ = Normalization::identity(n);
  output_ = Normalization::identity(n);
}

std::vector<int> MlpModel::hidden() const {
  std::vector<int> h;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) h.push_back(static_cast<int>(layers_[l].W.rows()));
  return h;
}

Activation MlpModel::activation() const {
  return layers_.size() > 1 ? layers_.front().activation : Activation::identity;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.W.size() + l.b.size());
  return n;
}

void MlpModel::initialize(std::uint64_t seed) {
  Rng rng(seed);
  for (auto& l : layers_) {
    const double limit = std::sqrt(3.0 / static_cast<double>(l.W.cols()));
    for (Eigen::Index i = 0; i < l.W.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.W.cols(); ++j) l.W(i, j) = rng.uniform(-limit, limit);
    }
    l.b.setZero();
  }
}

void MlpModel::validate() const {
  if (dim_ != 2 && dim_ != 3) throw ValidationError("model dimension must be 2 or 3");
  if (layers_.empty()) throw ValidationError("model has no layers");
  const Eigen::Index n = width();
  Eigen::Index in = n;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& L = layers_[l];
    if (L.W.cols() != in || L.b.size() != L.W.rows()) {
      throw ValidationError("layer " + std::to_string(l) + " does not chain with its input");
    }
    in = L.W.rows();
  }
  if (in != n) throw ValidationError("output layer width must be d^2");
  if (layers_.back().activation != Activation::identity) throw ValidationError("output layer must be linear");
  for (const auto* nrm : {&input_, &output_}) {
    if (nrm->mean.size() != n || nrm->scale.size() != n) throw ValidationError("normalization has the wrong size");
    if (!(nrm->scale.array() > 0.0).all() || !nrm->scale.allFinite()) {
      throw ValidationError("normalization scales must be positive");
    }
  }
}

Eigen::VectorXd MlpModel::forward_flat(const Eigen::VectorXd& f) const {
  if (f.size() != width()) throw ShapeMismatch("model expects " + std::to_string(width()) + " inputs");
  Eigen::VectorXd a = input_.normalize(f);
  for (const auto& l : layers_) {
    Eigen::VectorXd z = l.W * a + l.b;
    if (l.activation != Activation::identity) {
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = activate(l.activation, z[i]);
    }
    a = std::move(z);
  }
  return output_.denormalize(a);
}

Tensor2 MlpModel::forward(const Tensor2& F) const {
  if (F.dim() != dim_) {
    throw ShapeMismatch("model is " + std::to_string(dim_) + "D, got a " + std::to_string(F.dim()) + "D tensor");
  }
  const Eigen::VectorXd p = forward_flat(F.flat());
  return Tensor2::from_flat(dim_, std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

Eigen::MatrixXd MlpModel::jacobian(const Tensor2& F) const {
  if (F.dim() != dim_) {
    throw ShapeMismatch("model is " + std::to_string(dim_) + "D, got a " + std::to_string(F.dim()) + "D tensor");
  }
  Eigen::VectorXd a = input_.normalize(F.flat());
  Eigen::MatrixXd J = input_.scale.cwiseInverse().asDiagonal();
  for (const auto& l : layers_) {
    Eigen::VectorXd z = l.W * a + l.b;
    Eigen::MatrixXd Jz = l.W * J;
    if (l.activation != Activation::identity) {
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        Jz.row(i) *= activate_derivative(l.activation, z[i]);
        z[i] = activate(l.activation, z[i]);
      }
    }
    a = std::move(z);
    J = std::move(Jz);
  }
  return output_.scale.asDiagonal() * J;
}

}  // namespace porohom::nn
