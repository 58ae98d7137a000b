#pragma once

#include "porohom/fe2/backend.hpp"
#include "porohom/solvers/load_stepper.hpp"

#include <memory>
#include <vector>

namespace porohom::fe2 {

struct Fe2Result {
  solvers::LoadStepReport report;
  Eigen::VectorXd u;
  std::vector<fem::QuadPointState> states;  // final quadrature-point F and P
};

/// Nonlinear macro problem for one backend: det F <= 0 anywhere makes the
/// residual throw ConstitutiveError, which the line search and the load stepper
/// treat as a failed trial.
solvers::NonlinearProblem make_problem(const fem::Assembler& assembler, const fem::ConstitutiveCallback& callback);

/// Load-stepped solve of the assembler's Dirichlet problem from u = 0.
/// H0 replaces the per-step tangent factorization as BFGS initial inverse.
/// final_states costs one extra residual pass.
Fe2Result run_fe2(const fem::Assembler& assembler, const Backend& backend, const solvers::SolverConfig& config,
                  StressSink sink = {}, std::shared_ptr<const solvers::SparseInverse> H0 = nullptr,
                  Eigen::VectorXd u0 = {}, bool final_states = true);

/// Tangent assembled with one constant material tangent C at every point.
Eigen::SparseMatrix<double> constant_tangent(const fem::Assembler& assembler, const Eigen::MatrixXd& C);

}  // namespace porohom::fe2
