#pragma once

#include "porohom/fem/mesh.hpp"
#include "porohom/rve/beam_network.hpp"

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace porohom::app {

/// Named data array: one row per point or cell, 1 column (scalars) or 3 (vectors).
struct VtkArray {
  std::string name;
  Eigen::MatrixXd values;
};

/// Legacy ASCII unstructured grid of a macro mesh. 2D vectors are padded with z = 0.
std::string vtk_mesh(const fem::MacroMesh& mesh, const std::vector<VtkArray>& point_data,
                     const std::vector<VtkArray>& cell_data, const std::string& title = "porohom");

/// Beam network as VTK lines; node_positions overrides the reference coordinates.
std::string vtk_network(const rve::BeamNetwork& network, const std::vector<VtkArray>& point_data,
                        const std::vector<VtkArray>& cell_data, const Eigen::MatrixXd* node_positions = nullptr,
                        const std::string& title = "porohom");

/// Structure of a legacy unstructured-grid file, as read back by the format checker.
struct VtkSummary {
  std::size_t points = 0;
  std::size_t cells = 0;
  std::vector<int> cell_types;
  std::vector<std::pair<std::string, std::size_t>> point_arrays;  // name, components
  std::vector<std::pair<std::string, std::size_t>> cell_arrays;
};

/// Parses and checks counts, connectivity ranges and array lengths; ParseError on any defect.
VtkSummary read_vtk_summary(const std::string& text);

}  // namespace porohom::app
