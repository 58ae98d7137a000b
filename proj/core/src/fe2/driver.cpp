#include "porohom/fe2/driver.hpp"

#include "porohom/common/error.hpp"

namespace porohom::fe2 {

solvers::NonlinearProblem make_problem(const fem::Assembler& assembler, const fem::ConstitutiveCallback& callback) {
  solvers::NonlinearProblem p;
  p.residual = [&assembler, callback](const Eigen::VectorXd& u) {
    fem::AssemblyInfo info;
    Eigen::VectorXd R = assembler.residual(u, callback, false, &info);
    if (info.nonpositive_det > 0) {
      throw ConstitutiveError("det F <= 0 at " + std::to_string(info.nonpositive_det) + " quadrature points");
    }
    return R;
  };
  p.tangent = [&assembler, callback](const Eigen::VectorXd& u) { return assembler.tangent(u, callback); };
  return p;
}

Fe2Result run_fe2(const fem::Assembler& assembler, const Backend& backend, const solvers::SolverConfig& config,
                  StressSink sink, std::shared_ptr<const solvers::SparseInverse> H0, Eigen::VectorXd u0,
                  bool final_states) {
  config.validate();
  if (backend.dim() != assembler.dim()) {
    throw ShapeMismatch("backend is " + std::to_string(backend.dim()) + "D, mesh is " +
                        std::to_string(assembler.dim()) + "D");
  }
  const auto callback = make_callback(backend, std::move(sink));
  const auto problem = make_problem(assembler, callback);
  solvers::SteppedProblem stepped;
  stepped.set_load = [&assembler](double lambda, Eigen::VectorXd& u) { assembler.apply_dirichlet(u, lambda); };
  stepped.solve = [&](const Eigen::VectorXd& u) { return solvers::solve(problem, u, config, H0); };

  if (u0.size() == 0) u0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(assembler.dof_count()));
  if (u0.size() != static_cast<Eigen::Index>(assembler.dof_count())) throw ShapeMismatch("initial field has the wrong size");

  Fe2Result out;
  out.report = solvers::run_load_steps(stepped, std::move(u0), config.load);
  out.u = out.report.u;
  if (final_states) assembler.residual(out.u, make_callback(backend), false, nullptr, &out.states);
  return out;
}

Eigen::SparseMatrix<double> constant_tangent(const fem::Assembler& assembler, const Eigen::MatrixXd& C) {
  fem::ConstitutiveCallback cb;
  const int d = assembler.dim();
  cb.stress = [d](const Tensor2&) { return Tensor2(d); };
  cb.tangent = [C](const Tensor2&) { return C; };
  return assembler.tangent(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(assembler.dof_count())), cb);
}

}  // namespace porohom::fe2
