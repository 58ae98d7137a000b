#pragma once

#include "porohom/fem/mesh.hpp"

#include <string>
#include <vector>

namespace porohom::fem {

struct GeneratorOptions {
  int segments = 64;               // facets per hole or cylinder boundary
  unsigned long long seed = 7;     // interior point jitter
};

/// Structured [0,Lx]x[0,Ly] mesh; P1 splits each quad, P2 elevates the P1 split.
MacroMesh rectangle_mesh(int nx, int ny, ElementType type, double lx = 1.0, double ly = 1.0);

/// Structured box; P1 uses the 6-tetrahedron Kuhn split of every hexahedron.
MacroMesh box_mesh(int nx, int ny, int nz, ElementType type, double lx = 1.0, double ly = 1.0, double lz = 1.0);

/// Named demo geometries: square, cube, plate1, plate5, cubehole, cylinder.
/// Each refinement level halves the element size.
MacroMesh generate_mesh(const std::string& shape, ElementType type, int level, const GeneratorOptions& options = {});

std::vector<std::string> shape_names();

/// Doubles the elements per axis of a generated mesh. UnsupportedMesh for imported meshes.
MacroMesh refine(const MacroMesh& mesh);

/// Adds edge-midpoint nodes to a P1 mesh.
MacroMesh elevate_to_p2(const MacroMesh& p1);

}  // namespace porohom::fem
