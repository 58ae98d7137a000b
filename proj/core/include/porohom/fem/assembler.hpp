#pragma once

#include "porohom/common/tensor.hpp"
#include "porohom/fem/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <vector>

namespace porohom::fem {

/// Macroscopic constitutive response F -> P, optionally with dP/dF.
/// Tangent rows and columns use the row-major flattening of P and F.
struct ConstitutiveCallback {
  std::function<Tensor2(const Tensor2&)> stress;
  std::function<Eigen::MatrixXd(const Tensor2&)> tangent;

  bool has_tangent() const { return static_cast<bool>(tangent); }
};

struct QuadPointState {
  std::size_t element = 0;
  std::size_t point = 0;
  Tensor2 F;
  Tensor2 P;
  double weight_detJ = 0.0;
};

struct AssemblyInfo {
  std::size_t nonpositive_det = 0;  // quadrature points with det F <= 0
};

/// Weak-form assembly on a fixed mesh. Shape gradients and weights are
/// precomputed; assembly runs element by element in ascending order.
class Assembler {
 public:
  explicit Assembler(MacroMesh mesh);

  const MacroMesh& mesh() const { return mesh_; }
  int dim() const { return mesh_.dim; }
  std::size_t dof_count() const { return mesh_.dof_count(); }
  std::size_t points_per_element() const { return weights_.size() / std::max<std::size_t>(1, mesh_.element_count()); }
  std::size_t quad_point_count() const { return weights_.size(); }

  double weight_detJ(std::size_t e, std::size_t q) const { return weights_[e * points_per_element() + q]; }
  const Eigen::MatrixXd& shape_gradients(std::size_t e, std::size_t q) const { return grads_[e * points_per_element() + q]; }

  /// F = I + sum_a u_a (x) grad N_a.
  Tensor2 deformation_gradient(std::size_t e, std::size_t q, const Eigen::VectorXd& u) const;

  /// R_(a,i) = sum w detJ P_iJ dN_a/dX_J. Dirichlet rows are zeroed unless raw is set.
  Eigen::VectorXd residual(const Eigen::VectorXd& u, const ConstitutiveCallback& cb, bool raw = false,
                           AssemblyInfo* info = nullptr, std::vector<QuadPointState>* states = nullptr) const;

  /// dR/du. Constrained rows and columns are replaced by identity unless raw is set.
  /// Throws MissingTangent when the callback has no tangent.
  Eigen::SparseMatrix<double> tangent(const Eigen::VectorXd& u, const ConstitutiveCallback& cb, bool raw = false) const;

  /// 1 for DOFs carrying a Dirichlet condition.
  const std::vector<char>& constrained() const { return constrained_; }

  /// Writes lambda-scaled Dirichlet values into u.
  void apply_dirichlet(Eigen::VectorXd& u, double lambda) const;

 private:
  MacroMesh mesh_;
  std::vector<Eigen::MatrixXd> grads_;  // nodes x dim per quadrature point
  std::vector<double> weights_;
  std::vector<char> constrained_;
};

}  // namespace porohom::fem
