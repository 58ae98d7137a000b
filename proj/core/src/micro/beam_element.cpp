#include "porohom/micro/beam_element.hpp"

#include "porohom/common/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <vector>

namespace porohom::micro {

FrameBlocks frame_blocks_3d(const rve::Material& m, double L) {
  const double EA = m.E * m.A;
  const double EI = m.E * m.I;
  const double torsion = m.E * m.I * m.I / (2.0 * (1.0 + m.nu));
  FrameBlocks b;
  b.D = Eigen::Vector3d(EA, 12.0 * EI / (L * L), 12.0 * EI / (L * L)).asDiagonal();
  b.R1 = Eigen::Vector3d(torsion, 4.0 * EI, 4.0 * EI).asDiagonal();
  b.R2 = Eigen::Vector3d(-torsion, 2.0 * EI, 2.0 * EI).asDiagonal();
  b.C.setZero();
  b.C(1, 2) = -6.0 * EI / L;
  b.C(2, 1) = 6.0 * EI / L;
  return b;
}

Eigen::MatrixXd local_stiffness_3d(const rve::Material& m, double L) {
  const FrameBlocks b = frame_blocks_3d(m, L);
  Eigen::MatrixXd K(12, 12);
  const Eigen::Matrix3d Ct = b.C.transpose();
  K << b.D, Ct, -b.D, Ct,
       b.C, b.R1, Ct, b.R2,
       -b.D, b.C, b.D, b.C,
       b.C, b.R2, Ct, b.R1;
  return K / L;
}

Eigen::MatrixXd local_stiffness_2d(const rve::Material& m, double L) {
  const double a = m.E * m.A / L;
  const double EI = m.E * m.I;
  const double k12 = 12.0 * EI / (L * L * L);
  const double k6 = 6.0 * EI / (L * L);
  const double k4 = 4.0 * EI / L;
  const double k2 = 2.0 * EI / L;
  Eigen::MatrixXd K(6, 6);
  K << a, 0, 0, -a, 0, 0,
       0, k12, k6, 0, -k12, k6,
       0, k6, k4, 0, -k6, k2,
       -a, 0, 0, a, 0, 0,
       0, -k12, -k6, 0, k12, -k6,
       0, k6, k2, 0, -k6, k4;
  return K;
}

Eigen::MatrixXd element_transform(const Eigen::Vector3d& a, const Eigen::Vector3d& b, int dim) {
  const Eigen::Vector3d d = b - a;
  const double L = d.norm();
  if (!(L > 0.0)) throw ZeroLengthElement("element has zero length");
  const Eigen::Vector3d x = d / L;
  if (dim == 2) {
    Eigen::Matrix3d lambda;
    lambda << x.x(), x.y(), 0, -x.y(), x.x(), 0, 0, 0, 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(6, 6);
    T.block<3, 3>(0, 0) = lambda;
    T.block<3, 3>(3, 3) = lambda;
    return T;
  }
  // Reference direction global z, or global y for beams close to z.
  const Eigen::Vector3d ref = std::abs(x.z()) > 0.9 ? Eigen::Vector3d::UnitY() : Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d y = ref.cross(x).normalized();
  const Eigen::Vector3d z = x.cross(y);
  Eigen::Matrix3d lambda;
  lambda.row(0) = x.transpose();
  lambda.row(1) = y.transpose();
  lambda.row(2) = z.transpose();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(12, 12);
  for (int k = 0; k < 4; ++k) T.block<3, 3>(3 * k, 3 * k) = lambda;
  return T;
}

Eigen::MatrixXd element_stiffness(const rve::BeamNetwork& network, std::size_t element) {
  const auto& el = network.elements.at(element);
  const auto& a = network.nodes.at(static_cast<std::size_t>(el[0]));
  const auto& b = network.nodes.at(static_cast<std::size_t>(el[1]));
  const double L = (b - a).norm();
  if (!(L > 0.0)) throw ZeroLengthElement("element " + std::to_string(element) + " has zero length");
  const Eigen::MatrixXd T = element_transform(a, b, network.dim);
  const Eigen::MatrixXd Kl =
      network.dim == 2 ? local_stiffness_2d(network.material, L) : local_stiffness_3d(network.material, L);
  Eigen::MatrixXd K = T.transpose() * Kl * T;
  // Remove rounding asymmetry from the triple product.
  return 0.5 * (K + K.transpose());
}

Eigen::SparseMatrix<double> assemble(const rve::BeamNetwork& network) {
  const int ndof = network.dofs_per_node();
  const auto n = static_cast<Eigen::Index>(network.node_count() * static_cast<std::size_t>(ndof));
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(network.element_count() * static_cast<std::size_t>(4 * ndof * ndof));
  for (std::size_t e = 0; e < network.element_count(); ++e) {
    const Eigen::MatrixXd K = element_stiffness(network, e);
    const auto& el = network.elements[e];
    for (int r = 0; r < 2 * ndof; ++r) {
      const int gr = el[static_cast<std::size_t>(r / ndof)] * ndof + r % ndof;
      for (int c = 0; c < 2 * ndof; ++c) {
        const int gc = el[static_cast<std::size_t>(c / ndof)] * ndof + c % ndof;
        triplets.emplace_back(gr, gc, K(r, c));
      }
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

}  // namespace porohom::micro
