#include <doctest.h>

#include "porohom/common/error.hpp"
#include "porohom/fem/assembler.hpp"
#include "porohom/fem/generators.hpp"
#include "porohom/micro/micro_solver.hpp"
#include "porohom/solvers/fd_tangent.hpp"
#include "porohom/solvers/load_stepper.hpp"
#include "porohom/solvers/nonlinear.hpp"
#include "test_support.hpp"

#include <Eigen/Dense>

using namespace porohom;
using namespace porohom::solvers;

namespace {

Eigen::SparseMatrix<double> sparse(const Eigen::MatrixXd& A) { return A.sparseView(); }

Tensor2 neo_hooke(const Tensor2& F) {
  const SmallMatrix Fit = F.matrix().inverse().transpose();
  return Tensor2(SmallMatrix(F.matrix() - Fit + 2.0 * std::log(F.determinant()) * Fit));
}

struct FeProblem {
  fem::Assembler A;
  fem::ConstitutiveCallback cb;
  NonlinearProblem problem() const {
    return {[this](const Eigen::VectorXd& u) { return A.residual(u, cb); },
            [this](const Eigen::VectorXd& u) { return A.tangent(u, cb); }};
  }
};

FeProblem shear_square(int level) {
  auto mesh = fem::generate_mesh("square", fem::ElementType::P1, level);
  mesh.dirichlet.clear();
  for (Eigen::Index a = 0; a < mesh.nodes.rows(); ++a) {
    const double y = mesh.nodes(a, 1);
    if (y < 1e-12 || y > 1.0 - 1e-12) {
      mesh.dirichlet.push_back({static_cast<int>(a), 0, y > 0.5 ? 0.3 : 0.0});
      mesh.dirichlet.push_back({static_cast<int>(a), 1, y > 0.5 ? -0.1 : 0.0});
    }
  }
  fem::ConstitutiveCallback cb;
  cb.stress = neo_hooke;
  cb.tangent = [](const Tensor2& F) { return fd_constitutive_tangent(neo_hooke, F, 1e-6); };
  return {fem::Assembler(std::move(mesh)), cb};
}

SteppedProblem stepped(const FeProblem& fe, const SolverConfig& c) {
  return {[&fe](double lambda, Eigen::VectorXd& u) { fe.A.apply_dirichlet(u, lambda); },
          [&fe, c](const Eigen::VectorXd& u0) { return solve(fe.problem(), u0, c); }};
}

}  // namespace

TEST_CASE("config validation and names") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.wolfe.c2 = 1e-5;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  CHECK(method_from_string("newton") == Method::newton);
  CHECK(to_string(Method::bfgs) == "bfgs");
  CHECK_THROWS_AS(method_from_string("lbfgsb"), ParseError);
}

TEST_CASE("Newton iterates on x^2 - 4 from 3") {
  NonlinearProblem p;
  p.residual = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, x[0] * x[0] - 4.0); };
  p.tangent = [](const Eigen::VectorXd& x) { return sparse(Eigen::MatrixXd::Constant(1, 1, 2.0 * x[0])); };
  SolverConfig c;
  c.method = Method::newton;
  c.rel_residual_tol = 1e-15;
  const auto r = newton_solve(p, Eigen::VectorXd::Constant(1, 3.0), c);
  REQUIRE(r.converged);
  const double x1 = 13.0 / 6.0, x2 = 313.0 / 156.0;
  CHECK(r.residual_history[0] == doctest::Approx(5.0));
  CHECK(r.residual_history[1] == doctest::Approx(x1 * x1 - 4.0).epsilon(1e-14));
  CHECK(r.residual_history[2] == doctest::Approx(x2 * x2 - 4.0).epsilon(1e-12));
  CHECK(x2 == doctest::Approx(2.0064102564));
  // Quadratic convergence: e_{k+1} / e_k^2 stays bounded.
  for (std::size_t k = 1; k + 1 < r.residual_history.size(); ++k)
    if (r.residual_history[k + 1] > 1e-13) CHECK(r.residual_history[k + 1] / std::pow(r.residual_history[k], 2) < 1.0);
  CHECK(r.u[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("BFGS with the exact Hessian solves a quadratic in one iteration") {
  Rng rng(2);
  Eigen::MatrixXd M(6, 6);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = rng.uniform(-1, 1);
  const Eigen::MatrixXd A = M * M.transpose() + 6.0 * Eigen::MatrixXd::Identity(6, 6);
  Eigen::VectorXd b(6);
  for (int i = 0; i < 6; ++i) b[i] = rng.uniform(-1, 1);
  NonlinearProblem p;
  p.residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x - b; };
  p.tangent = [&](const Eigen::VectorXd&) { return sparse(A); };
  const auto r = bfgs_solve(p, Eigen::VectorXd::Zero(6), SolverConfig{});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK((A * r.u - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("BFGS inverse satisfies the secant condition and skips bad pairs") {
  const Eigen::MatrixXd A = Eigen::Vector3d(2, 3, 4).asDiagonal();
  auto H0 = std::make_shared<const SparseInverse>(sparse(A));
  BfgsInverse H(H0, 0);
  const Eigen::Vector3d s(0.1, -0.2, 0.3), y(0.3, -0.5, 1.0);
  CHECK(H.update(s, y));
  CHECK((H.apply(y) - s).norm() <= 1e-14);
  const Eigen::MatrixXd D = H.dense(3);
  CHECK((D - D.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_FALSE(H.update(s, -y));
  CHECK(H.pairs() == 1);
}

TEST_CASE("accepted line-search steps satisfy the Wolfe conditions") {
  const auto fe = shear_square(0);
  SolverConfig c;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fe.A.dof_count()));
  fe.A.apply_dirichlet(u, 0.5);
  const auto r = bfgs_solve(fe.problem(), u, c);
  REQUIRE(r.converged);
  REQUIRE(!r.line_search.empty());
  for (const auto& w : r.line_search) {
    CHECK(w.dphi0 < 0.0);
    CHECK(w.phi <= w.phi0 + c.wolfe.c1 * w.alpha * w.dphi0 + 1e-14 * w.phi0);
    CHECK(w.dphi >= c.wolfe.c2 * w.dphi0);
  }
}

TEST_CASE("BFGS and Newton agree on a hyperelastic shear problem") {
  const auto fe = shear_square(0);
  SolverConfig cb, cn;
  cn.method = Method::newton;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fe.A.dof_count()));
  const auto rb = run_load_steps(stepped(fe, cb), u, cb.load);
  const auto rn = run_load_steps(stepped(fe, cn), u, cn.load);
  CHECK(rb.converged);
  CHECK(rn.converged);
  CHECK((rb.u - rn.u).norm() <= 1e-8 * rn.u.norm());
  CHECK(rn.mean_iterations() <= rb.mean_iterations());
}

TEST_CASE("Newton takes one iteration per step on a linear problem") {
  const Eigen::MatrixXd A = Eigen::Vector3d(1, 2, 5).asDiagonal();
  const Eigen::Vector3d target(1, -2, 3);
  double lambda = 0.0;
  SteppedProblem sp;
  sp.set_load = [&](double l, Eigen::VectorXd&) { lambda = l; };
  sp.solve = [&](const Eigen::VectorXd& u0) {
    NonlinearProblem p;
    p.residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x - lambda * target; };
    p.tangent = [&](const Eigen::VectorXd&) { return sparse(A); };
    SolverConfig c;
    c.method = Method::newton;
    return newton_solve(p, u0, c);
  };
  const auto r = run_load_steps(sp, Eigen::VectorXd::Zero(3), LoadStepPolicy{});
  CHECK(r.converged);
  CHECK(r.steps.size() == 4);
  for (int it : r.accepted_iterations()) CHECK(it == 1);
}

TEST_CASE("one load step when a single step suffices") {
  double lambda = 0.0;
  SteppedProblem sp;
  sp.set_load = [&](double l, Eigen::VectorXd&) { lambda = l; };
  sp.solve = [&](const Eigen::VectorXd&) {
    SolveReport r;
    r.converged = true;
    r.iterations = 1;
    r.u = Eigen::VectorXd::Constant(1, lambda);
    return r;
  };
  LoadStepPolicy p;
  p.initial_steps = 1;
  const auto r = run_load_steps(sp, Eigen::VectorXd::Zero(1), p);
  CHECK(r.steps.size() == 1);
  CHECK(r.u[0] == 1.0);
}

TEST_CASE("load steps are cut back on injected failures and then complete") {
  double lo = 0.0, hi = 0.0;
  SteppedProblem sp;
  sp.set_load = [&](double l, Eigen::VectorXd& u) {
    lo = u[0];
    hi = l;
  };
  sp.solve = [&](const Eigen::VectorXd&) {
    if (hi > 0.5 && hi - lo > 0.2) throw ConstitutiveError("synthetic failure");
    SolveReport r;
    r.converged = true;
    r.iterations = 2;
    r.u = Eigen::VectorXd::Constant(1, hi);
    return r;
  };
  const auto r = run_load_steps(sp, Eigen::VectorXd::Zero(1), LoadStepPolicy{});
  CHECK(r.converged);
  CHECK(r.cutbacks() >= 1);
  CHECK(r.u[0] == 1.0);
  bool saw_failure = false;
  for (const auto& s : r.steps)
    if (!s.accepted) {
      saw_failure = true;
      CHECK(s.failure.find("synthetic") != std::string::npos);
    }
  CHECK(saw_failure);
  double last = 0.0;
  for (const auto& s : r.steps)
    if (s.accepted) {
      CHECK(s.lambda_start == doctest::Approx(last));
      last = s.lambda_end;
    }

  sp.solve = [](const Eigen::VectorXd&) -> SolveReport { throw ConstitutiveError("always"); };
  CHECK_THROWS_AS(run_load_steps(sp, Eigen::VectorXd::Zero(1), LoadStepPolicy{}), StepTooSmall);
}

TEST_CASE("load-stepped and single-shot solutions coincide") {
  const auto fe = shear_square(0);
  SolverConfig c;
  c.method = Method::newton;
  c.rel_residual_tol = 1e-12;
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fe.A.dof_count()));
  const auto stepped_r = run_load_steps(stepped(fe, c), u0, c.load);
  LoadStepPolicy one;
  one.initial_steps = 1;
  const auto single = run_load_steps(stepped(fe, c), u0, one);
  REQUIRE(stepped_r.converged);
  REQUIRE(single.converged);
  CHECK((stepped_r.u - single.u).norm() <= 1e-9 * single.u.norm());
}

TEST_CASE("iteration limit is reported") {
  const auto fe = shear_square(0);
  SolverConfig c;
  c.max_iterations = 1;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fe.A.dof_count()));
  fe.A.apply_dirichlet(u, 1.0);
  CHECK_THROWS_AS(bfgs_solve(fe.problem(), u, c), MaxIterations);
}

TEST_CASE("finite-difference tangents") {
  Rng rng(3);
  Eigen::MatrixXd C(4, 4);
  for (Eigen::Index i = 0; i < C.size(); ++i) C.data()[i] = rng.uniform(-2, 2);
  auto linear = [&](const Tensor2& F) {
    const Eigen::VectorXd p = C * (F - Tensor2::identity(2)).flat();
    return Tensor2::from_flat(2, std::span<const double>(p.data(), 4));
  };
  const auto F = test::random_F(rng, 2, 0.1);
  const auto Cfd = fd_constitutive_tangent(linear, F, 1e-6);
  CHECK((Cfd - C).norm() <= 1e-9 * C.norm());

  // Cubic map: central-difference error scales with eps^2.
  auto cubic = [](const Tensor2& F) {
    Tensor2 P(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) P(i, j) = std::pow(F(i, j), 3) + F(0, 0) * F(1, 1) * F(i, j);
    return P;
  };
  auto exact = [](const Tensor2& F) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, 4);
    for (int k = 0; k < 4; ++k) {
      const int i = k / 2, j = k % 2;
      J(k, k) += 3 * F(i, j) * F(i, j) + F(0, 0) * F(1, 1);
      J(k, 0) += F(1, 1) * F(i, j);
      J(k, 3) += F(0, 0) * F(i, j);
    }
    return J;
  };
  const double e1 = (fd_constitutive_tangent(cubic, F, 1e-2) - exact(F)).norm();
  const double e2 = (fd_constitutive_tangent(cubic, F, 5e-3) - exact(F)).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));

  const micro::MicroSolver s(test::network_2d());
  const auto M = fd_constitutive_tangent([&](const Tensor2& G) { return s.stress(G); }, Tensor2::identity(2), 1e-6);
  CHECK((M - M.transpose()).norm() <= 0.02 * M.norm());
}
