#pragma once

#include "porohom/fem/mesh.hpp"

#include <string>

namespace porohom::app {

struct LoadCaseOptions {
  double shear = 0.1;             // square: u_x = shear * y on the left and right edges
  double compression = 0.05;      // plates: top edge moved down by this amount
  double torsion_degrees = 36.0;  // 3D: total twist between the x end faces
  double axial_shift = 0.05;      // 3D: end faces moved apart by this fraction of the length, each
};

/// Replaces the Dirichlet data with the standard load case of the shape:
/// square shear, plate compression, or torsion of cube, cubehole and cylinder.
/// ValidationError for unknown shapes.
void apply_load_case(fem::MacroMesh& mesh, const std::string& shape, const LoadCaseOptions& options = {});

}  // namespace porohom::app
