#include "porohom/fem/mesh.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/hash.hpp"

#include <Eigen/LU>

#include <cmath>

namespace porohom::fem {

void MacroMesh::validate(bool require_dirichlet) const {
  if (dim != 2 && dim != 3) throw ValidationError("mesh: dim must be 2 or 3");
  if (nodes.cols() != dim) throw ValidationError("mesh: node coordinates do not match dim");
  const ReferenceElement ref(type, dim);
  if (elements.cols() != ref.node_count()) {
    throw ValidationError("mesh: " + to_string(type) + " elements need " + std::to_string(ref.node_count()) + " nodes");
  }
  if (elements.rows() == 0) throw ValidationError("mesh: no elements");
  const auto nn = static_cast<int>(nodes.rows());
  for (Eigen::Index e = 0; e < elements.rows(); ++e) {
    Eigen::MatrixXd X(ref.node_count(), dim);
    for (int a = 0; a < ref.node_count(); ++a) {
      const int n = elements(e, a);
      if (n < 0 || n >= nn) throw ValidationError("mesh: element " + std::to_string(e) + " has an invalid node index");
      X.row(a) = nodes.row(n);
    }
    for (const auto& xi : ref.points()) {
      const Eigen::MatrixXd J = X.transpose() * ref.shape_gradient(xi);
      const double det = J.determinant();
      if (!(det > 0.0)) {
        throw DegenerateElement("mesh: element " + std::to_string(e) + " has Jacobian determinant " + std::to_string(det));
      }
    }
  }
  for (const auto& d : dirichlet) {
    if (d.node < 0 || d.node >= nn || d.component < 0 || d.component >= dim || !std::isfinite(d.value)) {
      throw ValidationError("mesh: invalid Dirichlet entry on node " + std::to_string(d.node));
    }
  }
  if (require_dirichlet && dirichlet.empty()) throw ValidationError("mesh: Dirichlet set is empty");
}

std::string MacroMesh::fingerprint() const {
  Fnv1a h;
  h.update_value(dim);
  h.update_value(static_cast<int>(type));
  for (Eigen::Index i = 0; i < nodes.rows(); ++i)
    for (Eigen::Index d = 0; d < nodes.cols(); ++d) h.update_value(nodes(i, d));
  for (Eigen::Index i = 0; i < elements.rows(); ++i)
    for (Eigen::Index a = 0; a < elements.cols(); ++a) h.update_value(elements(i, a));
  return h.hex();
}

std::vector<int> MacroMesh::nodes_on_plane(int axis, double value, double tol) const {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
    if (std::abs(nodes(i, axis) - value) <= tol) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace porohom::fem
