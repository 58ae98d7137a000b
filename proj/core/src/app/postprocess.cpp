#include "porohom/app/postprocess.hpp"

#include "porohom/common/error.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace porohom::app {

double von_mises(const Tensor2& F, const Tensor2& P) {
  const double J = F.determinant();
  if (!(std::abs(J) > 0.0)) throw ConstitutiveError("von Mises stress undefined for det F = 0");
  const SmallMatrix tau = P.matrix() * F.matrix().transpose();
  const SmallMatrix s = 0.5 * (tau + tau.transpose()) / J;
  if (F.dim() == 2) {
    return std::sqrt(std::max(0.0, s(0, 0) * s(0, 0) - s(0, 0) * s(1, 1) + s(1, 1) * s(1, 1) + 3.0 * s(0, 1) * s(0, 1)));
  }
  const double a = s(0, 0) - s(1, 1);
  const double b = s(1, 1) - s(2, 2);
  const double c = s(2, 2) - s(0, 0);
  const double shear = s(0, 1) * s(0, 1) + s(1, 2) * s(1, 2) + s(2, 0) * s(2, 0);
  return std::sqrt(0.5 * (a * a + b * b + c * c) + 3.0 * shear);
}

FieldSet recover_fields(const fem::Assembler& assembler, const Eigen::VectorXd& u,
                        const std::vector<fem::QuadPointState>& states) {
  const auto& mesh = assembler.mesh();
  const auto nN = static_cast<Eigen::Index>(mesh.node_count());
  const auto nE = static_cast<Eigen::Index>(mesh.element_count());
  if (u.size() != nN * mesh.dim) throw ShapeMismatch("displacement vector does not match the mesh");
  FieldSet f;
  f.displacement = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      u.data(), nN, mesh.dim);
  Eigen::VectorXd node_sum = Eigen::VectorXd::Zero(nN), node_w = Eigen::VectorXd::Zero(nN);
  Eigen::VectorXd el_sum = Eigen::VectorXd::Zero(nE), el_w = Eigen::VectorXd::Zero(nE);
  for (const auto& s : states) {
    const double vm = von_mises(s.F, s.P);
    const auto e = static_cast<Eigen::Index>(s.element);
    el_sum[e] += s.weight_detJ * vm;
    el_w[e] += s.weight_detJ;
    for (Eigen::Index k = 0; k < mesh.elements.cols(); ++k) {
      const int a = mesh.elements(e, k);
      node_sum[a] += s.weight_detJ * vm;
      node_w[a] += s.weight_detJ;
    }
  }
  f.von_mises = node_sum.cwiseQuotient(node_w.cwiseMax(1e-300));
  f.element_von_mises = el_sum.cwiseQuotient(el_w.cwiseMax(1e-300));
  return f;
}

namespace {

double relative(double diff, double ref) { return ref > 0.0 ? diff / ref : diff; }

void check_same_mesh(const fem::MacroMesh& a, const fem::MacroMesh& b) {
  if (a.dim != b.dim || a.type != b.type) throw MeshMismatch("meshes differ in dimension or element type");
  if (a.node_count() != b.node_count() || a.element_count() != b.element_count()) {
    throw MeshMismatch("meshes differ in size (" + std::to_string(a.node_count()) + " vs " +
                       std::to_string(b.node_count()) + " nodes)");
  }
  if (a.elements != b.elements) throw MeshMismatch("meshes differ in connectivity");
  if ((a.nodes - b.nodes).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a.nodes.cwiseAbs().maxCoeff())) {
    throw MeshMismatch("meshes differ in node coordinates");
  }
}

}  // namespace

ComparisonReport compare_fields(const fem::MacroMesh& mesh_a, const FieldSet& a, const fem::MacroMesh& mesh_b,
                                const FieldSet& b) {
  check_same_mesh(mesh_a, mesh_b);
  if (a.displacement.rows() != b.displacement.rows() || a.displacement.cols() != b.displacement.cols() ||
      a.von_mises.size() != b.von_mises.size()) {
    throw MeshMismatch("field sizes differ");
  }
  ComparisonReport r;
  r.displacement_difference = a.displacement - b.displacement;
  r.von_mises_difference = a.von_mises - b.von_mises;
  r.u_l2 = relative(r.displacement_difference.norm(), b.displacement.norm());
  r.u_max = relative(r.displacement_difference.cwiseAbs().maxCoeff(), b.displacement.cwiseAbs().maxCoeff());
  r.vm_l2 = relative(r.von_mises_difference.norm(), b.von_mises.norm());
  r.vm_max = relative(r.von_mises_difference.cwiseAbs().maxCoeff(), b.von_mises.cwiseAbs().maxCoeff());
  return r;
}

std::string ComparisonReport::to_json(int indent) const {
  nlohmann::json j{{"u_rel_l2", u_l2}, {"u_rel_max", u_max}, {"vm_rel_l2", vm_l2}, {"vm_rel_max", vm_max}};
  return j.dump(indent);
}

std::string ComparisonReport::to_csv() const {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << "norm,value\nu_l2," << u_l2 << "\nu_max," << u_max << "\nvm_l2," << vm_l2 << "\nvm_max,"
     << vm_max << "\n";
  return os.str();
}

}  // namespace porohom::app
