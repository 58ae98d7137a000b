#pragma once

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace porohom::rve {

/// Beam section and material. Circular section unless overridden.
struct Material {
  double E = 1000.0;
  double nu = 0.3;
  double A = 0.0;
  double I = 0.0;

  /// E = 1000, nu = 0.3 and a circular strut of radius 0.02 * edge.
  static Material defaults(double domain_edge);
};

struct PeriodicPair {
  int plus = 0;
  int minus = 0;
  int axis = 0;
  bool operator==(const PeriodicPair&) const = default;
};

/// Periodic beam-frame RVE on [0, edge]^dim. 2D nodes keep z = 0.
struct BeamNetwork {
  int dim = 2;
  std::vector<Eigen::Vector3d> nodes;
  std::vector<std::array<int, 2>> elements;
  std::vector<PeriodicPair> periodic_pairs;
  std::vector<int> corner_nodes;
  Material material;
  double domain_edge = 1.0;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t element_count() const { return elements.size(); }
  int dofs_per_node() const { return dim == 2 ? 3 : 6; }

  double element_length(std::size_t e) const;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  /// Connectivity of the graph with periodic partners identified.
  bool is_connected() const;

  /// Stable fingerprint of geometry, topology and material.
  std::string fingerprint() const;
};

/// Union-find over node indices merging every periodic pair.
std::vector<int> periodic_classes(const BeamNetwork& network);

}  // namespace porohom::rve
