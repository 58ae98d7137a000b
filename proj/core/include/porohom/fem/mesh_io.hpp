#pragma once

#include "porohom/fem/mesh.hpp"

#include <filesystem>
#include <string>

namespace porohom::fem {

// Text format:
//   dim nNodes nElems nDirichlet elemType
//   nNodes lines   x y [z]
//   nElems lines   node indices (VTK order)
//   nDirichlet     node component value
// Indices are 0-based; '#' starts a comment. Loaded meshes cannot be refined.

MacroMesh parse_mesh(const std::string& text);
std::string format_mesh(const MacroMesh& mesh);
MacroMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const MacroMesh& mesh, const std::filesystem::path& path);

}  // namespace porohom::fem
