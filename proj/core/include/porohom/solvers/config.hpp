#pragma once

#include <string>

namespace porohom::solvers {

enum class Method { bfgs, newton };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct WolfeParams {
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_evaluations = 20;
  double max_step = 16.0;
};

struct LoadStepPolicy {
  int initial_steps = 4;
  double min_fraction = 1.0 / 64.0;  // smallest increment, as a share of the total load
  int grow_after = 2;                // successes in a row before doubling
};

struct SolverConfig {
  Method method = Method::bfgs;
  double rel_residual_tol = 1e-10;
  double abs_residual_tol = 0.0;     // optional floor for ||R||
  int max_iterations = 100;
  double fd_epsilon = 1e-6;
  WolfeParams wolfe;
  LoadStepPolicy load;
  int dense_limit = 10000;           // BFGS keeps every pair up to this many DOFs
  int lbfgs_memory = 30;             // pairs kept above the limit

  /// ValidationError unless 0 < c1 < c2 < 1 and tolerances are positive.
  void validate() const;
};

}  // namespace porohom::solvers
