#pragma once

#include "porohom/fem/assembler.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace porohom::app {

/// Von Mises stress of sigma = sym(P F^T) / det F. In 2D the out-of-plane stress is zero.
double von_mises(const Tensor2& F, const Tensor2& P);

/// Nodal and element fields of one macro solution.
struct FieldSet {
  Eigen::MatrixXd displacement;   // nodes x dim
  Eigen::VectorXd von_mises;      // per node, w detJ weighted average over adjacent quadrature points
  Eigen::VectorXd element_von_mises;  // per element, weighted average of its quadrature points
};

FieldSet recover_fields(const fem::Assembler& assembler, const Eigen::VectorXd& u,
                        const std::vector<fem::QuadPointState>& states);

/// Relative deviations of run a from reference run b.
struct ComparisonReport {
  double u_l2 = 0.0;    // ||u_a - u_b||_2 / ||u_b||_2
  double u_max = 0.0;   // ||u_a - u_b||_inf / ||u_b||_inf
  double vm_l2 = 0.0;
  double vm_max = 0.0;
  Eigen::MatrixXd displacement_difference;  // nodes x dim
  Eigen::VectorXd von_mises_difference;

  std::string to_json(int indent = 2) const;
  /// Table layout: norm,value.
  std::string to_csv() const;
};

/// MeshMismatch when the meshes differ.
ComparisonReport compare_fields(const fem::MacroMesh& mesh_a, const FieldSet& a, const fem::MacroMesh& mesh_b,
                                const FieldSet& b);

}  // namespace porohom::app
