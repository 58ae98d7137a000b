#pragma once

#include "porohom/solvers/config.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <vector>

namespace porohom::solvers {

/// Square nonlinear system R(u) = 0 with an optional Jacobian.
struct NonlinearProblem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
  std::function<Eigen::SparseMatrix<double>(const Eigen::VectorXd&)> tangent;
};

/// Factorized sparse matrix used as an (initial) inverse Jacobian.
class SparseInverse {
 public:
  /// Throws SingularTangent when the factorization fails.
  explicit SparseInverse(const Eigen::SparseMatrix<double>& A);
  ~SparseInverse();
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::Index size() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Eigen::Index n_ = 0;
};

struct WolfeRecord {
  double alpha = 0.0;
  double phi0 = 0.0;   // merit 0.5 ||R||^2 at the start of the step
  double dphi0 = 0.0;  // its directional derivative
  double phi = 0.0;    // merit at the accepted step
  double dphi = 0.0;
  int evaluations = 0;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  int residual_evaluations = 0;
  int skipped_updates = 0;
  std::vector<double> residual_history;  // ||R|| per iterate, starting with the initial guess
  std::vector<WolfeRecord> line_search;
  Eigen::VectorXd u;
  double seconds_residual = 0.0;
  double seconds_tangent = 0.0;
  double seconds_linear = 0.0;

  double relative_residual() const;
};

/// BFGS on R(u) = 0 with a Wolfe line search on 0.5 ||R||^2.
///
/// The inverse-Jacobian approximation starts from H0 (the factorized tangent at
/// u0 when not given) and is updated in product form; all pairs are kept up to
/// config.dense_limit DOFs, the last lbfgs_memory pairs above.
SolveReport bfgs_solve(const NonlinearProblem& problem, Eigen::VectorXd u0, const SolverConfig& config,
                       std::shared_ptr<const SparseInverse> H0 = nullptr);

/// Newton iteration with sparse LU solves of the supplied tangent.
SolveReport newton_solve(const NonlinearProblem& problem, Eigen::VectorXd u0, const SolverConfig& config);

/// Runs the configured method.
SolveReport solve(const NonlinearProblem& problem, Eigen::VectorXd u0, const SolverConfig& config,
                  std::shared_ptr<const SparseInverse> H0 = nullptr);

/// Dense inverse-Hessian approximation implied by H0 and the stored pairs (testing aid).
class BfgsInverse {
 public:
  BfgsInverse(std::shared_ptr<const SparseInverse> H0, int memory);
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  /// Returns false (and stores nothing) when <s, y> <= 1e-12 ||s|| ||y||.
  bool update(const Eigen::VectorXd& s, const Eigen::VectorXd& y);
  Eigen::MatrixXd dense(Eigen::Index n) const;
  std::size_t pairs() const { return s_.size(); }

 private:
  std::shared_ptr<const SparseInverse> H0_;
  int memory_;
  std::vector<Eigen::VectorXd> s_, y_;
  std::vector<double> rho_;
};

}  // namespace porohom::solvers
