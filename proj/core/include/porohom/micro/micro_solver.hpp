#pragma once

#include "porohom/common/tensor.hpp"
#include "porohom/rve/beam_network.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

namespace porohom::micro {

enum class LinearSolver { direct, cg };

struct MicroOptions {
  LinearSolver solver = LinearSolver::direct;
  double cg_tolerance = 1e-13;
  int cg_max_iterations = 20000;
  int refinement_steps = 1;  // direct solver: steps against an extended-precision rhs
};

/// Nodal result of one RVE solve. Displacements are total: fluctuation plus (F - I) v.
struct MicroSolution {
  Eigen::MatrixXd displacements;  // nN x dim
  Eigen::MatrixXd rotations;      // nN x (1 in 2D, 3 in 3D)
  Eigen::MatrixXd fluctuations;   // nN x dim
  Tensor2 applied_F;
  double reduced_residual = 0.0;  // ||K x - f|| / ||f|| of the reduced system

  /// Total nodal DOF vector (node-major, translations then rotations).
  Eigen::VectorXd nodal_dofs() const;
};

/// Constrained system: unknowns are periodic fluctuation classes and rotations.
struct ReducedSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  /// For every full DOF, the reduced unknown it follows or -1 when fixed to zero.
  std::vector<int> dof_map;
};

struct ElementForces {
  // Per end (0 = first node, 1 = second node); 3-vectors, z = 0 in 2D.
  std::array<Eigen::Vector3d, 2> Q_local, Q_global, M_local, M_global;
  Eigen::VectorXd local;   // f = K_local T u_e
  Eigen::VectorXd global;  // f = K_e u_e
};

/// Beam RVE with cached element matrices and factorization of the reduced matrix.
///
/// The reduced matrix does not depend on F, so a solver can be shared by many
/// evaluations; solve() is const and safe for concurrent callers.
class MicroSolver {
 public:
  explicit MicroSolver(rve::BeamNetwork network, MicroOptions options = {});
  ~MicroSolver();
  MicroSolver(MicroSolver&&) noexcept;
  MicroSolver& operator=(MicroSolver&&) noexcept;

  const rve::BeamNetwork& network() const { return network_; }
  int dim() const { return network_.dim; }

  /// Reduced system for a given F (matrix is shared, rhs depends on F).
  ReducedSystem reduced_system(const Tensor2& F) const;

  MicroSolution solve(const Tensor2& F) const;
  ElementForces end_forces(std::size_t element, const MicroSolution& solution) const;
  Tensor2 average_stress(const MicroSolution& solution) const;

  /// average_stress(solve(F)).
  Tensor2 stress(const Tensor2& F) const { return average_stress(solve(F)); }

  /// Per-beam equivalent stress (axial plus extreme-fibre bending).
  std::vector<double> beam_von_mises(const MicroSolution& solution) const;

  const Eigen::MatrixXd& element_matrix(std::size_t e) const { return element_k_[e]; }
  std::size_t reduced_size() const { return static_cast<std::size_t>(n_reduced_); }

  /// Process-wide number of completed solves.
  static std::uint64_t solve_count();
  static void reset_solve_count();

 private:
  struct Factorization;
  Eigen::VectorXd affine_dofs(const Tensor2& F) const;
  std::vector<long double> extended_rhs(const Tensor2& F) const;
  Eigen::VectorXd element_dofs(std::size_t e, const Eigen::VectorXd& u) const;
  ElementForces forces_from_dofs(std::size_t e, const Eigen::VectorXd& u) const;

  rve::BeamNetwork network_;
  MicroOptions options_;
  std::vector<Eigen::MatrixXd> element_k_;
  std::vector<int> dof_map_;
  int n_reduced_ = 0;
  Eigen::SparseMatrix<double> reduced_;
  std::unique_ptr<Factorization> factor_;
};

/// One-shot helpers.
ReducedSystem apply_macro_bc(const rve::BeamNetwork& network, const Tensor2& F);
MicroSolution solve_micro(const rve::BeamNetwork& network, const Tensor2& F);
ElementForces element_end_forces(const rve::BeamNetwork& network, std::size_t element, const MicroSolution& solution);
Tensor2 average_stress(const rve::BeamNetwork& network, const MicroSolution& solution);

}  // namespace porohom::micro
