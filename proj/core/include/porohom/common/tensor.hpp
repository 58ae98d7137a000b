#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <span>
#include <string>

namespace porohom {

/// Dense matrix with at most 3x3 entries, stored inline.
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// A d x d second-order tensor (d = 2 or 3): deformation gradients and stresses.
///
/// Flattening is row-major everywhere in the library: component (i, j) maps to
/// index i * d + j. Tangent matrices dP/dF use the same ordering for rows and
/// columns.
class Tensor2 {
 public:
  Tensor2() : Tensor2(3) {}
  explicit Tensor2(int dim);
  explicit Tensor2(const SmallMatrix& values);

  static Tensor2 identity(int dim);
  static Tensor2 from_flat(int dim, std::span<const double> row_major);

  int dim() const { return static_cast<int>(values_.rows()); }
  int size() const { return dim() * dim(); }

  double& operator()(int i, int j) { return values_(i, j); }
  double operator()(int i, int j) const { return values_(i, j); }

  const SmallMatrix& matrix() const { return values_; }
  SmallMatrix& matrix() { return values_; }

  Eigen::VectorXd flat() const;
  void write_flat(std::span<double> out) const;

  bool all_finite() const;
  double frobenius_norm() const { return values_.norm(); }
  double determinant() const { return values_.determinant(); }

  Tensor2 operator+(const Tensor2& other) const;
  Tensor2 operator-(const Tensor2& other) const;
  Tensor2 operator*(double s) const;

  std::string to_string(int precision = 6) const;

 private:
  SmallMatrix values_;
};

/// Flat index of component (i, j) for a d x d tensor.
constexpr int flat_index(int dim, int i, int j) { return i * dim + j; }

}  // namespace porohom
