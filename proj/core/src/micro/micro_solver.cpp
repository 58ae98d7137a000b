#include "porohom/micro/micro_solver.hpp"

#include "porohom/common/error.hpp"
#include "porohom/micro/beam_element.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cmath>

namespace porohom::micro {

namespace {

std::atomic<std::uint64_t> g_solve_count{0};

Eigen::VectorXd extended_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x,
                                  const std::vector<long double>& b) {
  std::vector<long double> r(b);
  for (Eigen::Index c = 0; c < A.outerSize(); ++c) {
    const long double xc = x[c];
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
      r[static_cast<std::size_t>(it.row())] -= static_cast<long double>(it.value()) * xc;
  }
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = static_cast<double>(r[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

struct MicroSolver::Factorization {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
};

Eigen::VectorXd MicroSolution::nodal_dofs() const {
  const auto n = displacements.rows();
  const auto d = displacements.cols();
  const auto r = rotations.cols();
  Eigen::VectorXd u(n * (d + r));
  for (Eigen::Index i = 0; i < n; ++i) {
    u.segment(i * (d + r), d) = displacements.row(i).transpose();
    u.segment(i * (d + r) + d, r) = rotations.row(i).transpose();
  }
  return u;
}

MicroSolver::MicroSolver(rve::BeamNetwork network, MicroOptions options)
    : network_(std::move(network)), options_(options), factor_(std::make_unique<Factorization>()) {
  network_.validate();
  const int dim = network_.dim;
  const int ndof = network_.dofs_per_node();
  const std::size_t nn = network_.node_count();

  element_k_.reserve(network_.element_count());
  for (std::size_t e = 0; e < network_.element_count(); ++e) element_k_.push_back(element_stiffness(network_, e));

  // Master-slave numbering: a periodic class shares one set of unknowns;
  // translations of classes containing a corner are fixed.
  const auto cls = rve::periodic_classes(network_);
  std::vector<char> fixed_class(nn, 0);
  for (int c : network_.corner_nodes) fixed_class[static_cast<std::size_t>(cls[static_cast<std::size_t>(c)])] = 1;
  std::vector<int> class_base(nn, -1);
  int next = 0;
  for (std::size_t i = 0; i < nn; ++i) {
    const auto c = static_cast<std::size_t>(cls[i]);
    if (class_base[c] >= 0) continue;
    class_base[c] = next;
    next += fixed_class[c] ? ndof - dim : ndof;
  }
  n_reduced_ = next;
  dof_map_.assign(nn * static_cast<std::size_t>(ndof), -1);
  for (std::size_t i = 0; i < nn; ++i) {
    const auto c = static_cast<std::size_t>(cls[i]);
    for (int k = 0; k < ndof; ++k) {
      int idx = -1;
      if (fixed_class[c]) {
        if (k >= dim) idx = class_base[c] + (k - dim);
      } else {
        idx = class_base[c] + k;
      }
      dof_map_[i * static_cast<std::size_t>(ndof) + static_cast<std::size_t>(k)] = idx;
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(network_.element_count() * static_cast<std::size_t>(4 * ndof * ndof));
  for (std::size_t e = 0; e < network_.element_count(); ++e) {
    const auto& el = network_.elements[e];
    const auto& K = element_k_[e];
    for (int r = 0; r < 2 * ndof; ++r) {
      const int gr = dof_map_[static_cast<std::size_t>(el[static_cast<std::size_t>(r / ndof)] * ndof + r % ndof)];
      if (gr < 0) continue;
      for (int c = 0; c < 2 * ndof; ++c) {
        const int gc = dof_map_[static_cast<std::size_t>(el[static_cast<std::size_t>(c / ndof)] * ndof + c % ndof)];
        if (gc >= 0) triplets.emplace_back(gr, gc, K(r, c));
      }
    }
  }
  reduced_.resize(n_reduced_, n_reduced_);
  reduced_.setFromTriplets(triplets.begin(), triplets.end());

  if (options_.solver == LinearSolver::direct) {
    factor_->ldlt.compute(reduced_);
    if (factor_->ldlt.info() != Eigen::Success) {
      throw SingularSystem("reduced RVE matrix could not be factorized (disconnected network or missing corners)");
    }
    // Each pivot is compared with its own diagonal entry: the torsion terms are
    // many orders below the bending terms, so a global threshold would reject
    // well-posed 3D networks.
    const Eigen::VectorXd D = factor_->ldlt.vectorD();
    const Eigen::VectorXd diag = factor_->ldlt.permutationP() * Eigen::VectorXd(reduced_.diagonal());
    for (Eigen::Index i = 0; i < D.size(); ++i) {
      if (!(D[i] > 1e-14 * std::abs(diag[i]))) {
        throw SingularSystem("reduced RVE matrix is not positive definite (pivot " + std::to_string(D[i]) +
                             " against diagonal " + std::to_string(diag[i]) + ")");
      }
    }
  } else {
    factor_->cg.setTolerance(options_.cg_tolerance);
    factor_->cg.setMaxIterations(options_.cg_max_iterations);
    factor_->cg.compute(reduced_);
    if (factor_->cg.info() != Eigen::Success) throw SingularSystem("CG preconditioner setup failed");
  }
}

MicroSolver::~MicroSolver() = default;
MicroSolver::MicroSolver(MicroSolver&&) noexcept = default;
MicroSolver& MicroSolver::operator=(MicroSolver&&) noexcept = default;

Eigen::VectorXd MicroSolver::affine_dofs(const Tensor2& F) const {
  const int dim = network_.dim;
  if (F.dim() != dim) {
    throw ShapeMismatch("F is " + std::to_string(F.dim()) + "D but the network is " + std::to_string(dim) + "D");
  }
  if (!F.all_finite()) throw ValidationError("F has non-finite entries");
  const int ndof = network_.dofs_per_node();
  const SmallMatrix H = F.matrix() - SmallMatrix::Identity(dim, dim);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(network_.node_count()) * ndof);
  for (std::size_t i = 0; i < network_.node_count(); ++i) {
    const SmallVector v = network_.nodes[i].head(dim);
    u.segment(static_cast<Eigen::Index>(i) * ndof, dim) = H * v;
  }
  return u;
}

Eigen::VectorXd MicroSolver::element_dofs(std::size_t e, const Eigen::VectorXd& u) const {
  const int ndof = network_.dofs_per_node();
  const auto& el = network_.elements[e];
  Eigen::VectorXd ue(2 * ndof);
  ue.head(ndof) = u.segment(el[0] * ndof, ndof);
  ue.tail(ndof) = u.segment(el[1] * ndof, ndof);
  return ue;
}

std::vector<long double> MicroSolver::extended_rhs(const Tensor2& F) const {
  const int dim = network_.dim;
  if (F.dim() != dim) {
    throw ShapeMismatch("F is " + std::to_string(F.dim()) + "D but the network is " + std::to_string(dim) + "D");
  }
  const int ndof = network_.dofs_per_node();
  std::vector<long double> rhs(static_cast<std::size_t>(n_reduced_), 0.0L);
  std::vector<long double> ue(static_cast<std::size_t>(2 * ndof));
  for (std::size_t e = 0; e < network_.element_count(); ++e) {
    const auto& el = network_.elements[e];
    std::fill(ue.begin(), ue.end(), 0.0L);
    for (int end = 0; end < 2; ++end) {
      const Eigen::Vector3d& v = network_.nodes[static_cast<std::size_t>(el[static_cast<std::size_t>(end)])];
      for (int i = 0; i < dim; ++i) {
        long double s = 0.0L;
        for (int j = 0; j < dim; ++j) s += (static_cast<long double>(F(i, j)) - (i == j)) * v[j];
        ue[static_cast<std::size_t>(end * ndof + i)] = s;
      }
    }
    const Eigen::MatrixXd& K = element_k_[e];
    for (int r = 0; r < 2 * ndof; ++r) {
      const int gr = dof_map_[static_cast<std::size_t>(el[static_cast<std::size_t>(r / ndof)] * ndof + r % ndof)];
      if (gr < 0) continue;
      long double f = 0.0L;
      for (int c = 0; c < 2 * ndof; ++c) f += static_cast<long double>(K(r, c)) * ue[static_cast<std::size_t>(c)];
      rhs[static_cast<std::size_t>(gr)] -= f;
    }
  }
  return rhs;
}

ReducedSystem MicroSolver::reduced_system(const Tensor2& F) const {
  const Eigen::VectorXd ubar = affine_dofs(F);
  const int ndof = network_.dofs_per_node();
  ReducedSystem sys;
  sys.matrix = reduced_;
  sys.dof_map = dof_map_;
  sys.rhs = Eigen::VectorXd::Zero(n_reduced_);
  for (std::size_t e = 0; e < network_.element_count(); ++e) {
    const Eigen::VectorXd fe = element_k_[e] * element_dofs(e, ubar);
    const auto& el = network_.elements[e];
    for (int r = 0; r < 2 * ndof; ++r) {
      const int gr = dof_map_[static_cast<std::size_t>(el[static_cast<std::size_t>(r / ndof)] * ndof + r % ndof)];
      if (gr >= 0) sys.rhs[gr] -= fe[r];
    }
  }
  return sys;
}

MicroSolution MicroSolver::solve(const Tensor2& F) const {
  const ReducedSystem sys = reduced_system(F);
  Eigen::VectorXd x;
  if (options_.solver == LinearSolver::direct) {
    x = factor_->ldlt.solve(sys.rhs);
    if (options_.refinement_steps > 0) {
      // Slender struts and the weak torsion terms leave the reduced matrix badly
      // conditioned; refining against an extended-precision rhs keeps the
      // solution linear in F to near machine precision.
      const std::vector<long double> b = extended_rhs(F);
      for (int k = 0; k < options_.refinement_steps; ++k)
        x += factor_->ldlt.solve(extended_residual(reduced_, x, b));
    }
  } else {
    x = factor_->cg.solve(sys.rhs);
    if (factor_->cg.info() != Eigen::Success) throw SingularSystem("CG did not converge on the RVE system");
  }
  const double fnorm = sys.rhs.norm();

  const int dim = network_.dim;
  const int ndof = network_.dofs_per_node();
  const auto nn = static_cast<Eigen::Index>(network_.node_count());
  const Eigen::VectorXd ubar = affine_dofs(F);

  MicroSolution sol;
  sol.applied_F = F;
  sol.reduced_residual = fnorm > 0.0 ? (reduced_ * x - sys.rhs).norm() / fnorm : (reduced_ * x).norm();
  sol.displacements.resize(nn, dim);
  sol.fluctuations.resize(nn, dim);
  sol.rotations.resize(nn, ndof - dim);
  for (Eigen::Index i = 0; i < nn; ++i) {
    for (int k = 0; k < ndof; ++k) {
      const int idx = dof_map_[static_cast<std::size_t>(i * ndof + k)];
      const double value = idx >= 0 ? x[idx] : 0.0;
      if (k < dim) {
        sol.fluctuations(i, k) = value;
        sol.displacements(i, k) = value + ubar[i * ndof + k];
      } else {
        sol.rotations(i, k - dim) = value;
      }
    }
  }
  g_solve_count.fetch_add(1, std::memory_order_relaxed);
  return sol;
}

ElementForces MicroSolver::end_forces(std::size_t element, const MicroSolution& solution) const {
  return forces_from_dofs(element, solution.nodal_dofs());
}

ElementForces MicroSolver::forces_from_dofs(std::size_t element, const Eigen::VectorXd& u) const {
  const int dim = network_.dim;
  const int ndof = network_.dofs_per_node();
  const auto& el = network_.elements.at(element);
  const Eigen::VectorXd ue = element_dofs(element, u);
  const Eigen::MatrixXd T = element_transform(network_.nodes[static_cast<std::size_t>(el[0])],
                                              network_.nodes[static_cast<std::size_t>(el[1])], dim);
  ElementForces f;
  f.global = element_k_[element] * ue;
  f.local = T * f.global;
  for (int end = 0; end < 2; ++end) {
    auto& Ql = f.Q_local[static_cast<std::size_t>(end)];
    auto& Qg = f.Q_global[static_cast<std::size_t>(end)];
    auto& Ml = f.M_local[static_cast<std::size_t>(end)];
    auto& Mg = f.M_global[static_cast<std::size_t>(end)];
    Ql.setZero();
    Qg.setZero();
    Ml.setZero();
    Mg.setZero();
    Ql.head(dim) = f.local.segment(end * ndof, dim);
    Qg.head(dim) = f.global.segment(end * ndof, dim);
    if (dim == 2) {
      Ml.z() = f.local[end * ndof + 2];
      Mg.z() = f.global[end * ndof + 2];
    } else {
      Ml = f.local.segment(end * ndof + 3, 3);
      Mg = f.global.segment(end * ndof + 3, 3);
    }
  }
  return f;
}

Tensor2 MicroSolver::average_stress(const MicroSolution& solution) const {
  const int dim = network_.dim;
  SmallMatrix P = SmallMatrix::Zero(dim, dim);
  const SmallMatrix I = SmallMatrix::Identity(dim, dim);
  const Eigen::VectorXd u = solution.nodal_dofs();
  for (std::size_t e = 0; e < network_.element_count(); ++e) {
    const auto& el = network_.elements[e];
    const SmallVector dv = (network_.nodes[static_cast<std::size_t>(el[1])] - network_.nodes[static_cast<std::size_t>(el[0])]).head(dim);
    const double L = dv.norm();
    const double L2 = L * L;
    const SmallVector r = dv / L;
    const SmallVector du = (solution.displacements.row(el[1]) - solution.displacements.row(el[0])).transpose();
    const ElementForces f = forces_from_dofs(e, u);
    const SmallVector Q = f.Q_global[1].head(dim);

    // Integrals of sigma, J sigma and sigma F^T over a beam with constant section force.
    const SmallMatrix QR = Q * r.transpose();
    const SmallMatrix S = 0.5 * L * (QR + QR.transpose());
    const double J = 1.0 + du.dot(dv) / L2;
    const SmallMatrix SF = S * (I + du * dv.transpose() / L2);
    P += S + J * S - SF;
  }
  const double V = std::pow(network_.domain_edge, dim);
  return Tensor2(SmallMatrix(P / V));
}

std::vector<double> MicroSolver::beam_von_mises(const MicroSolution& solution) const {
  const auto& m = network_.material;
  const double c = std::sqrt(m.A / 3.141592653589793);
  std::vector<double> out(network_.element_count());
  const Eigen::VectorXd u = solution.nodal_dofs();
  for (std::size_t e = 0; e < network_.element_count(); ++e) {
    const ElementForces f = forces_from_dofs(e, u);
    const double axial = std::abs(f.Q_local[1].x()) / m.A;
    double moment = 0.0;
    for (int end = 0; end < 2; ++end) {
      const auto& M = f.M_local[static_cast<std::size_t>(end)];
      moment = std::max(moment, network_.dim == 2 ? std::abs(M.z()) : std::hypot(M.y(), M.z()));
    }
    out[e] = axial + moment * c / m.I;
  }
  return out;
}

std::uint64_t MicroSolver::solve_count() { return g_solve_count.load(std::memory_order_relaxed); }
void MicroSolver::reset_solve_count() { g_solve_count.store(0, std::memory_order_relaxed); }

ReducedSystem apply_macro_bc(const rve::BeamNetwork& network, const Tensor2& F) {
  return MicroSolver(network).reduced_system(F);
}

MicroSolution solve_micro(const rve::BeamNetwork& network, const Tensor2& F) { return MicroSolver(network).solve(F); }

ElementForces element_end_forces(const rve::BeamNetwork& network, std::size_t element, const MicroSolution& solution) {
  return MicroSolver(network).end_forces(element, solution);
}

Tensor2 average_stress(const rve::BeamNetwork& network, const MicroSolution& solution) {
  return MicroSolver(network).average_stress(solution);
}

}  // namespace porohom::micro
