#pragma once

#include "porohom/rve/beam_network.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace porohom::micro {

/// Sub-blocks of the 3D frame element in local axes (x along the beam).
struct FrameBlocks {
  Eigen::Matrix3d D, R1, R2, C;
};

/// D = diag(EA, 12EI/L^2, 12EI/L^2), R1 = diag(EI^2/(2(1+nu)), 4EI, 4EI),
/// R2 = diag(-EI^2/(2(1+nu)), 2EI, 2EI), C couples transverse shear and bending.
FrameBlocks frame_blocks_3d(const rve::Material& m, double L);

/// (1/L) [[D, C^T, -D, C^T], [C, R1, C^T, R2], [-D, C, D, C], [C, R2, C^T, R1]].
Eigen::MatrixXd local_stiffness_3d(const rve::Material& m, double L);

/// Plane frame element, DOFs (u, v, theta) per node.
Eigen::MatrixXd local_stiffness_2d(const rve::Material& m, double L);

/// Rotation taking global DOFs to local ones (block diagonal, rows are local axes).
Eigen::MatrixXd element_transform(const Eigen::Vector3d& a, const Eigen::Vector3d& b, int dim);

/// Global element stiffness T^T K_local T. Throws ZeroLengthElement.
Eigen::MatrixXd element_stiffness(const rve::BeamNetwork& network, std::size_t element);

/// Unconstrained global stiffness over all nodal DOFs (node-major, dofs_per_node each).
Eigen::SparseMatrix<double> assemble(const rve::BeamNetwork& network);

}  // namespace porohom::micro
