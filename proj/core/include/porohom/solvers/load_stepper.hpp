#pragma once

#include "porohom/solvers/nonlinear.hpp"

#include <functional>
#include <string>
#include <vector>

namespace porohom::solvers {

struct LoadStep {
  double lambda_start = 0.0;
  double lambda_end = 0.0;
  bool accepted = false;
  int iterations = 0;
  std::string failure;  // empty for accepted steps
  std::vector<double> residual_history;
  std::vector<WolfeRecord> line_search;
};

struct LoadStepReport {
  std::vector<LoadStep> steps;
  bool converged = false;
  Eigen::VectorXd u;
  double seconds_total = 0.0;
  double seconds_residual = 0.0;
  double seconds_tangent = 0.0;
  double seconds_linear = 0.0;

  std::vector<int> accepted_iterations() const;
  double mean_iterations() const;
  int cutbacks() const;
  /// JSON object with per-step iterations, residual histories and timings.
  std::string to_json(int indent = 2) const;
};

/// Load-scaled problem: set_load writes the lambda-scaled boundary data into u;
/// solve runs the inner nonlinear solver from that state.
struct SteppedProblem {
  std::function<void(double lambda, Eigen::VectorXd& u)> set_load;
  std::function<SolveReport(const Eigen::VectorXd& u0)> solve;
};

/// Incremental loading from lambda = 0 to 1. The increment halves on failure
/// (down to policy.min_fraction, else StepTooSmall) and doubles after
/// policy.grow_after successes, never above the initial increment.
LoadStepReport run_load_steps(const SteppedProblem& problem, Eigen::VectorXd u, const LoadStepPolicy& policy);

}  // namespace porohom::solvers
