#include "porohom/app/load_cases.hpp"

#include "porohom/common/error.hpp"

#include <cmath>
#include <numbers>

namespace porohom::app {

namespace {

void clamp_nodes(fem::MacroMesh& mesh, const std::vector<int>& nodes, const auto& displacement) {
  for (int a : nodes) {
    const Eigen::VectorXd X = mesh.nodes.row(a).transpose();
    const Eigen::VectorXd u = displacement(X);
    for (int i = 0; i < mesh.dim; ++i) mesh.dirichlet.push_back({a, i, u[i]});
  }
}

}  // namespace

void apply_load_case(fem::MacroMesh& mesh, const std::string& shape, const LoadCaseOptions& o) {
  mesh.dirichlet.clear();
  const Eigen::VectorXd lo = mesh.nodes.colwise().minCoeff().transpose();
  const Eigen::VectorXd hi = mesh.nodes.colwise().maxCoeff().transpose();
  const double tol = 1e-9 * (1.0 + (hi - lo).maxCoeff());

  if (shape == "square") {
    if (mesh.dim != 2) throw ValidationError("square load case needs a 2D mesh");
    auto shear = [&](const Eigen::VectorXd& X) { return Eigen::VectorXd(Eigen::Vector2d(o.shear * X[1], 0.0)); };
    clamp_nodes(mesh, mesh.nodes_on_plane(0, lo[0], tol), shear);
    clamp_nodes(mesh, mesh.nodes_on_plane(0, hi[0], tol), shear);
  } else if (shape == "plate1" || shape == "plate5") {
    if (mesh.dim != 2) throw ValidationError("plate load case needs a 2D mesh");
    clamp_nodes(mesh, mesh.nodes_on_plane(1, lo[1], tol),
                [](const Eigen::VectorXd&) { return Eigen::VectorXd(Eigen::Vector2d::Zero()); });
    clamp_nodes(mesh, mesh.nodes_on_plane(1, hi[1], tol),
                [&](const Eigen::VectorXd&) { return Eigen::VectorXd(Eigen::Vector2d(0.0, -o.compression)); });
  } else if (shape == "cube" || shape == "cubehole" || shape == "cylinder") {
    if (mesh.dim != 3) throw ValidationError("torsion load case needs a 3D mesh");
    // Twist about the x axis through the section centre; each end face turns by
    // half the total angle in opposite senses and moves outward along x.
    const double yc = 0.5 * (lo[1] + hi[1]);
    const double zc = 0.5 * (lo[2] + hi[2]);
    const double length = hi[0] - lo[0];
    const double half = 0.5 * o.torsion_degrees * std::numbers::pi / 180.0;
    for (int side = 0; side < 2; ++side) {
      const double angle = side == 0 ? -half : half;
      const double shift = (side == 0 ? -1.0 : 1.0) * o.axial_shift * length;
      const double c = std::cos(angle), s = std::sin(angle);
      clamp_nodes(mesh, mesh.nodes_on_plane(0, side == 0 ? lo[0] : hi[0], tol), [&](const Eigen::VectorXd& X) {
        const double y = X[1] - yc, z = X[2] - zc;
        return Eigen::VectorXd(Eigen::Vector3d(shift, c * y - s * z - y, s * y + c * z - z));
      });
    }
  } else {
    throw ValidationError("no load case for shape '" + shape + "'");
  }
}

}  // namespace porohom::app
