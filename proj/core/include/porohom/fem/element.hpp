#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace porohom::fem {

enum class ElementType { Q1, P1, P2 };

std::string to_string(ElementType type);
/// Accepts Q1, P1, P2 (case-insensitive). ParseError otherwise.
ElementType element_type_from_string(const std::string& s);

/// Reference element with its quadrature rule.
///
/// Node order follows VTK: quad/hex corners counter-clockwise (bottom face
/// first); tri6 and tet10 list vertices, then edge midpoints 01, 12, 20
/// (and 03, 13, 23 for tet10).
class ReferenceElement {
 public:
  ReferenceElement(ElementType type, int dim);

  ElementType type() const { return type_; }
  int dim() const { return dim_; }
  int node_count() const { return nodes_; }
  int vtk_cell_type() const;

  const std::vector<Eigen::VectorXd>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  Eigen::VectorXd shape(const Eigen::VectorXd& xi) const;
  /// node_count x dim matrix of dN/dxi.
  Eigen::MatrixXd shape_gradient(const Eigen::VectorXd& xi) const;

 private:
  ElementType type_;
  int dim_;
  int nodes_;
  std::vector<Eigen::VectorXd> points_;
  std::vector<double> weights_;
};

}  // namespace porohom::fem
