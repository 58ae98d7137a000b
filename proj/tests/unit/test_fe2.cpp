#include <doctest.h>

#include "porohom/common/error.hpp"
#include "porohom/fe2/backend.hpp"
#include "porohom/fe2/driver.hpp"
#include "porohom/fem/generators.hpp"
#include "porohom/micro/micro_solver.hpp"
#include "porohom/solvers/fd_tangent.hpp"
#include "test_support.hpp"

using namespace porohom;
using namespace porohom::fe2;

namespace {

nn::MlpModel small_model(int dim) {
  nn::MlpModel m(dim, {12, 12}, nn::Activation::gelu);
  m.initialize(3);
  m.input_normalization().scale.setConstant(0.1);
  for (int i = 0; i < dim; ++i) m.input_normalization().mean[i * dim + i] = 1.0;
  return m;
}

// P = C (F - I) with an isotropic C, written as a one-hidden-layer identity network.
nn::MlpModel linear_model() {
  nn::MlpModel m(2, {4}, nn::Activation::identity);
  m.layers()[0].W = Eigen::MatrixXd::Identity(4, 4);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(4, 4);
  C(0, 0) = C(3, 3) = 3.0;
  C(0, 3) = C(3, 0) = 1.0;
  C(1, 1) = C(2, 2) = C(1, 2) = C(2, 1) = 1.0;
  m.layers()[1].W = C;
  m.input_normalization().mean << 1.0, 0.0, 0.0, 1.0;
  return m;
}

fem::MacroMesh sheared_square() {
  auto mesh = fem::generate_mesh("square", fem::ElementType::P1, 0);
  mesh.dirichlet.clear();
  for (Eigen::Index a = 0; a < mesh.nodes.rows(); ++a) {
    const double y = mesh.nodes(a, 1);
    if (y < 1e-12 || y > 1 - 1e-12) {
      mesh.dirichlet.push_back({static_cast<int>(a), 0, y > 0.5 ? 0.05 : 0.0});
      mesh.dirichlet.push_back({static_cast<int>(a), 1, 0.0});
    }
  }
  return mesh;
}

}  // namespace

TEST_CASE("NN backend tangent is the network Jacobian") {
  const auto m = small_model(2);
  const NnBackend b(m);
  Rng rng(1);
  const auto F = test::random_F(rng, 2, 0.1);
  CHECK((b.tangent(F) - m.jacobian(F)).norm() == 0.0);
  CHECK((b.stress(F).flat() - m.forward(F).flat()).norm() == 0.0);
  CHECK(b.stress_calls() == 1);
  CHECK(b.tangent_calls() == 1);
}

TEST_CASE("beam backend tangent is a central difference of its stress") {
  const BeamBackend b(test::network_2d(), 1e-6);
  Rng rng(2);
  const auto F = test::random_F(rng, 2, 0.05);
  const auto ref = solvers::fd_constitutive_tangent([&](const Tensor2& G) { return b.solver().stress(G); }, F, 1e-6);
  CHECK((b.tangent(F) - ref).norm() <= 1e-12 * ref.norm());
  CHECK(b.stress_calls() == 0);
  CHECK(b.tangent_calls() == 1);
}

TEST_CASE("stress sink sees only stress evaluations") {
  const NnBackend b(small_model(2));
  std::size_t seen = 0;
  const auto cb = make_callback(b, [&](const Tensor2&, const Tensor2&) { ++seen; });
  const fem::Assembler A(sheared_square());
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(A.dof_count()));
  A.residual(u, cb);
  CHECK(seen == A.quad_point_count());
  A.tangent(u, cb);
  CHECK(seen == A.quad_point_count());
}

TEST_CASE("inverted elements raise a constitutive error") {
  const NnBackend b(small_model(2));
  const fem::Assembler A(sheared_square());
  const auto p = make_problem(A, make_callback(b));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(A.dof_count()));
  for (Eigen::Index a = 0; a < A.mesh().nodes.rows(); ++a) u[2 * a] = -2.0 * A.mesh().nodes(a, 0);
  CHECK_THROWS_AS(p.residual(u), ConstitutiveError);
}

TEST_CASE("constant tangent equals the assembled tangent of a linear material") {
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(4, 4) * 2.0;
  C(0, 3) = C(3, 0) = 0.7;
  fem::ConstitutiveCallback cb;
  cb.stress = [&](const Tensor2& F) {
    const Eigen::VectorXd p = C * (F - Tensor2::identity(2)).flat();
    return Tensor2::from_flat(2, std::span<const double>(p.data(), 4));
  };
  cb.tangent = [&](const Tensor2&) { return C; };
  const fem::Assembler A(sheared_square());
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(A.dof_count()));
  const Eigen::MatrixXd a = constant_tangent(A, C), b = A.tangent(u, cb);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("NN-driven FE2 never calls the beam solver") {
  const fem::Assembler A(sheared_square());
  const NnBackend b(linear_model());
  const auto before = micro::MicroSolver::solve_count();
  const auto r = run_fe2(A, b, solvers::SolverConfig{});
  CHECK(r.report.converged);
  CHECK(micro::MicroSolver::solve_count() == before);
  CHECK(b.stress_calls() > 0);
  CHECK(r.states.size() == A.quad_point_count());
}

TEST_CASE("beam-driven FE2 converges and every stress call is one RVE solve") {
  const fem::Assembler A(sheared_square());
  const BeamBackend b(test::network_2d());
  const auto before = micro::MicroSolver::solve_count();
  std::size_t harvested = 0;
  const auto r = run_fe2(A, b, solvers::SolverConfig{}, [&](const Tensor2&, const Tensor2&) { ++harvested; });
  CHECK(r.report.converged);
  // The final-states pass evaluates once more per quadrature point, outside the sink.
  CHECK(harvested + A.quad_point_count() == b.stress_calls());
  const auto fd_solves = b.tangent_calls() * 8;
  CHECK(micro::MicroSolver::solve_count() - before == b.stress_calls() + fd_solves);
  for (const auto& s : r.report.steps)
    if (s.accepted) CHECK(s.residual_history.back() <= 1e-10 * s.residual_history.front());
}
