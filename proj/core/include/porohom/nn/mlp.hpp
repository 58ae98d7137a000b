#pragma once

#include "porohom/common/tensor.hpp"
#include "porohom/nn/activation.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace porohom::nn {

/// Per-component affine map to zero mean and unit scale.
struct Normalization {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // strictly positive

  static Normalization identity(int n);
  /// Sample mean and standard deviation of the columns of x (components x samples).
  /// Components with std below 1e-12 keep scale 1.
  static Normalization fit(const Eigen::MatrixXd& x);

  Eigen::VectorXd normalize(const Eigen::VectorXd& v) const { return (v - mean).cwiseQuotient(scale); }
  Eigen::VectorXd denormalize(const Eigen::VectorXd& v) const { return v.cwiseProduct(scale) + mean; }
};

struct Layer {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;
  Activation activation = Activation::identity;
};

/// Feed-forward network from flattened F (d^2, row-major) to flattened P.
/// Hidden layers share one activation; the output layer is linear.
class MlpModel {
 public:
  MlpModel() = default;
  /// Zero weights and identity normalization.
  MlpModel(int dim, std::vector<int> hidden, Activation activation);

  int dim() const { return dim_; }
  int width() const { return dim_ * dim_; }
  std::vector<int> hidden() const;
  Activation activation() const;
  std::size_t parameter_count() const;

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }
  Normalization& input_normalization() { return input_; }
  const Normalization& input_normalization() const { return input_; }
  Normalization& output_normalization() { return output_; }
  const Normalization& output_normalization() const { return output_; }

  /// LeCun-uniform weights (limit sqrt(3 / fan_in)), zero biases.
  void initialize(std::uint64_t seed);

  /// ValidationError when layer shapes do not chain or scales are not positive.
  void validate() const;

  Eigen::VectorXd forward_flat(const Eigen::VectorXd& f) const;
  /// ShapeMismatch when F.dim() differs from the model.
  Tensor2 forward(const Tensor2& F) const;
  /// dP/dF in row-major flattening, by forward-mode accumulation.
  Eigen::MatrixXd jacobian(const Tensor2& F) const;

 private:
  int dim_ = 0;
  std::vector<Layer> layers_;
  Normalization input_;
  Normalization output_;
};

}  // namespace porohom::nn
