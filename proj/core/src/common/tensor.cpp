#include "porohom/common/tensor.hpp"

#include "porohom/common/error.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace porohom {

Tensor2::Tensor2(int dim) {
  if (dim != 2 && dim != 3) {
    throw ShapeMismatch("tensor dimension must be 2 or 3, got " + std::to_string(dim));
  }
  values_ = SmallMatrix::Zero(dim, dim);
}

Tensor2::Tensor2(const SmallMatrix& values) : values_(values) {
  if (values.rows() != values.cols() || (values.rows() != 2 && values.rows() != 3)) {
    throw ShapeMismatch("tensor must be 2x2 or 3x3");
  }
}

Tensor2 Tensor2::identity(int dim) {
  Tensor2 t(dim);
  t.values_.setIdentity();
  return t;
}

Tensor2 Tensor2::from_flat(int dim, std::span<const double> row_major) {
  Tensor2 t(dim);
  if (static_cast<int>(row_major.size()) != dim * dim) {
    throw ShapeMismatch("expected " + std::to_string(dim * dim) + " tensor components, got " +
                        std::to_string(row_major.size()));
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) t.values_(i, j) = row_major[flat_index(dim, i, j)];
  }
  return t;
}

Eigen::VectorXd Tensor2::flat() const {
  Eigen::VectorXd out(size());
  write_flat(std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

void Tensor2::write_flat(std::span<double> out) const {
  const int d = dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) out[flat_index(d, i, j)] = values_(i, j);
  }
}

bool Tensor2::all_finite() const { return values_.allFinite(); }

Tensor2 Tensor2::operator+(const Tensor2& other) const {
  if (other.dim() != dim()) throw ShapeMismatch("tensor dimension mismatch");
  return Tensor2(SmallMatrix(values_ + other.values_));
}

Tensor2 Tensor2::operator-(const Tensor2& other) const {
  if (other.dim() != dim()) throw ShapeMismatch("tensor dimension mismatch");
  return Tensor2(SmallMatrix(values_ - other.values_));
}

Tensor2 Tensor2::operator*(double s) const { return Tensor2(SmallMatrix(values_ * s)); }

std::string Tensor2::to_string(int precision) const {
  std::ostringstream os;
  os << std::setprecision(precision);
  const int d = dim();
  for (int i = 0; i < d; ++i) {
    os << "[";
    for (int j = 0; j < d; ++j) {
      os << std::setw(precision + 7) << values_(i, j);
      if (j + 1 < d) os << ", ";
    }
    os << "]\n";
  }
  return os.str();
}

}  // namespace porohom
