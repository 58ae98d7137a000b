#include "porohom/solvers/config.hpp"

#include "porohom/common/error.hpp"

namespace porohom::solvers {

std::string to_string(Method m) { return m == Method::bfgs ? "bfgs" : "newton"; }

Method method_from_string(const std::string& s) {
  if (s == "bfgs") return Method::bfgs;
  if (s == "newton") return Method::newton;
  throw ParseError("unknown solver '" + s + "' (expected bfgs or newton)");
}

void SolverConfig::validate() const {
  if (!(wolfe.c1 > 0.0 && wolfe.c1 < wolfe.c2 && wolfe.c2 < 1.0)) {
    throw ValidationError("Wolfe constants need 0 < c1 < c2 < 1");
  }
  if (!(rel_residual_tol > 0.0) || abs_residual_tol < 0.0) throw ValidationError("residual tolerance must be positive");
  if (max_iterations < 1 || wolfe.max_evaluations < 1) throw ValidationError("iteration limits must be positive");
  if (!(fd_epsilon > 0.0)) throw ValidationError("finite-difference step must be positive");
  if (load.initial_steps < 1 || !(load.min_fraction > 0.0) || load.grow_after < 1) {
    throw ValidationError("invalid load-step policy");
  }
  if (lbfgs_memory < 1) throw ValidationError("BFGS memory must be positive");
}

}  // namespace porohom::solvers
