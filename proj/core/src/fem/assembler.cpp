#include "porohom/fem/assembler.hpp"

#include "porohom/common/error.hpp"

#include <Eigen/LU>

namespace porohom::fem {

Assembler::Assembler(MacroMesh mesh) : mesh_(std::move(mesh)) {
  mesh_.validate();
  const ReferenceElement ref(mesh_.type, mesh_.dim);
  const int npe = ref.node_count();
  std::vector<Eigen::MatrixXd> ref_grads;
  for (const auto& xi : ref.points()) ref_grads.push_back(ref.shape_gradient(xi));
  const std::size_t nq = ref.points().size();
  grads_.reserve(mesh_.element_count() * nq);
  weights_.reserve(mesh_.element_count() * nq);
  Eigen::MatrixXd X(npe, mesh_.dim);
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    for (int a = 0; a < npe; ++a) X.row(a) = mesh_.nodes.row(mesh_.elements(static_cast<Eigen::Index>(e), a));
    for (std::size_t q = 0; q < nq; ++q) {
      const Eigen::MatrixXd J = X.transpose() * ref_grads[q];
      const double det = J.determinant();
      if (!(det > 0.0)) {
        throw DegenerateElement("element " + std::to_string(e) + " point " + std::to_string(q) +
                                " has Jacobian determinant " + std::to_string(det));
      }
      grads_.push_back(ref_grads[q] * J.inverse());
      weights_.push_back(ref.weights()[q] * det);
    }
  }
  constrained_.assign(mesh_.dof_count(), 0);
  for (const auto& d : mesh_.dirichlet) {
    constrained_[static_cast<std::size_t>(d.node * mesh_.dim + d.component)] = 1;
  }
}

Tensor2 Assembler::deformation_gradient(std::size_t e, std::size_t q, const Eigen::VectorXd& u) const {
  if (static_cast<std::size_t>(u.size()) != dof_count()) {
    throw ShapeMismatch("displacement vector has " + std::to_string(u.size()) + " entries, mesh has " +
                        std::to_string(dof_count()) + " DOFs");
  }
  if (e >= mesh_.element_count() || q >= points_per_element()) throw ValidationError("quadrature index out of range");
  const int d = mesh_.dim;
  const Eigen::MatrixXd& G = shape_gradients(e, q);
  Tensor2 F = Tensor2::identity(d);
  for (Eigen::Index a = 0; a < G.rows(); ++a) {
    const int node = mesh_.elements(static_cast<Eigen::Index>(e), a);
    for (int i = 0; i < d; ++i) {
      const double ui = u[node * d + i];
      for (int J = 0; J < d; ++J) F(i, J) += ui * G(a, J);
    }
  }
  return F;
}

Eigen::VectorXd Assembler::residual(const Eigen::VectorXd& u, const ConstitutiveCallback& cb, bool raw,
                                    AssemblyInfo* info, std::vector<QuadPointState>* states) const {
  const int d = mesh_.dim;
  const std::size_t nq = points_per_element();
  Eigen::VectorXd R = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof_count()));
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    for (std::size_t q = 0; q < nq; ++q) {
      const Tensor2 F = deformation_gradient(e, q, u);
      if (info != nullptr && !(F.determinant() > 0.0)) ++info->nonpositive_det;
      Tensor2 P;
      try {
        P = cb.stress(F);
      } catch (const Error& err) {
        throw ConstitutiveError("element " + std::to_string(e) + " point " + std::to_string(q) + ": " + err.what());
      }
      if (P.dim() != d) throw ShapeMismatch("constitutive callback returned a stress of the wrong dimension");
      const double w = weight_detJ(e, q);
      const Eigen::MatrixXd& G = shape_gradients(e, q);
      for (Eigen::Index a = 0; a < G.rows(); ++a) {
        const int node = mesh_.elements(static_cast<Eigen::Index>(e), a);
        for (int i = 0; i < d; ++i) {
          double s = 0.0;
          for (int J = 0; J < d; ++J) s += P(i, J) * G(a, J);
          R[node * d + i] += w * s;
        }
      }
      if (states != nullptr) states->push_back({e, q, F, P, w});
    }
  }
  if (!raw) {
    for (std::size_t k = 0; k < constrained_.size(); ++k) {
      if (constrained_[k]) R[static_cast<Eigen::Index>(k)] = 0.0;
    }
  }
  return R;
}

Eigen::SparseMatrix<double> Assembler::tangent(const Eigen::VectorXd& u, const ConstitutiveCallback& cb, bool raw) const {
  if (!cb.has_tangent()) throw MissingTangent("constitutive callback provides no tangent");
  const int d = mesh_.dim;
  const std::size_t nq = points_per_element();
  const int npe = mesh_.nodes_per_element();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh_.element_count() * static_cast<std::size_t>(npe * npe * d * d));
  Eigen::MatrixXd Ke(npe * d, npe * d);
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    Ke.setZero();
    for (std::size_t q = 0; q < nq; ++q) {
      const Tensor2 F = deformation_gradient(e, q, u);
      const Eigen::MatrixXd A = cb.tangent(F);
      if (A.rows() != d * d || A.cols() != d * d) throw ShapeMismatch("constitutive tangent has the wrong shape");
      const double w = weight_detJ(e, q);
      const Eigen::MatrixXd& G = shape_gradients(e, q);
      // B maps element DOFs (b, k) to F components (k, L): dF_kL = u_bk dN_b/dX_L.
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d * d, npe * d);
      for (int b = 0; b < npe; ++b)
        for (int k = 0; k < d; ++k)
          for (int L = 0; L < d; ++L) B(k * d + L, b * d + k) = G(b, L);
      Ke.noalias() += w * B.transpose() * A * B;
    }
    for (int r = 0; r < npe * d; ++r) {
      const int gr = mesh_.elements(static_cast<Eigen::Index>(e), r / d) * d + r % d;
      for (int c = 0; c < npe * d; ++c) {
        const int gc = mesh_.elements(static_cast<Eigen::Index>(e), c / d) * d + c % d;
        if (!raw && (constrained_[static_cast<std::size_t>(gr)] || constrained_[static_cast<std::size_t>(gc)])) continue;
        triplets.emplace_back(gr, gc, Ke(r, c));
      }
    }
  }
  if (!raw) {
    for (std::size_t k = 0; k < constrained_.size(); ++k) {
      if (constrained_[k]) triplets.emplace_back(static_cast<int>(k), static_cast<int>(k), 1.0);
    }
  }
  const auto n = static_cast<Eigen::Index>(dof_count());
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

void Assembler::apply_dirichlet(Eigen::VectorXd& u, double lambda) const {
  if (static_cast<std::size_t>(u.size()) != dof_count()) throw ShapeMismatch("displacement vector size mismatch");
  for (const auto& d : mesh_.dirichlet) u[d.node * mesh_.dim + d.component] = lambda * d.value;
}

}  // namespace porohom::fem
