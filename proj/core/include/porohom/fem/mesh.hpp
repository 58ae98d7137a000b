#pragma once

#include "porohom/fem/element.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace porohom::fem {

using Connectivity = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct DirichletCondition {
  int node = 0;
  int component = 0;
  double value = 0.0;
};

/// Parameters a built-in generator needs to rebuild (and refine) a mesh.
struct MeshOrigin {
  std::string shape;                 // square, cube, plate1, ... or rectangle / box
  int level = 0;
  std::array<int, 3> cells{0, 0, 0}; // rectangle / box only
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  int segments = 64;
  unsigned long long seed = 7;
};

/// Macroscopic mesh with a single element type. Immutable once built.
struct MacroMesh {
  int dim = 2;
  ElementType type = ElementType::Q1;
  Eigen::MatrixXd nodes;  // nN x dim
  Connectivity elements;  // nE x nodes per element
  std::vector<DirichletCondition> dirichlet;
  std::optional<MeshOrigin> origin;

  std::size_t node_count() const { return static_cast<std::size_t>(nodes.rows()); }
  std::size_t element_count() const { return static_cast<std::size_t>(elements.rows()); }
  std::size_t dof_count() const { return node_count() * static_cast<std::size_t>(dim); }
  int nodes_per_element() const { return static_cast<int>(elements.cols()); }

  /// DegenerateElement when a Jacobian determinant is not positive;
  /// ValidationError for bad indices or (when required) missing Dirichlet data.
  void validate(bool require_dirichlet = false) const;

  /// Fingerprint of dim, element type, coordinates and connectivity.
  std::string fingerprint() const;

  /// Nodes whose coordinate `axis` equals `value` within tol.
  std::vector<int> nodes_on_plane(int axis, double value, double tol = 1e-9) const;
};

}  // namespace porohom::fem
