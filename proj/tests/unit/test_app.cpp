#include <doctest.h>

#include "porohom/app/benchmark.hpp"
#include "porohom/app/load_cases.hpp"
#include "porohom/app/postprocess.hpp"
#include "porohom/app/run.hpp"
#include "porohom/app/vtk.hpp"
#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"
#include "porohom/fem/generators.hpp"
#include "porohom/micro/micro_solver.hpp"
#include "porohom/nn/model_io.hpp"
#include "test_support.hpp"

#include <json.hpp>

using namespace porohom;
using namespace porohom::app;

namespace {

RunSpec square_spec(BackendKind kind, const std::filesystem::path& file) {
  RunSpec s;
  s.shape = "square";
  s.element = fem::ElementType::P1;
  s.level = 0;
  s.backend = kind;
  s.backend_file = file;
  return s;
}

std::filesystem::path linear_nn_file(int dim, const std::filesystem::path& dir) {
  // One identity hidden layer: a linear map with a positive diagonal stiffness.
  nn::MlpModel m(dim, {dim * dim}, nn::Activation::identity);
  const int n = dim * dim;
  m.layers()[0].W = Eigen::MatrixXd::Identity(n, n);
  m.layers()[1].W = 10.0 * Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < dim; ++i) m.input_normalization().mean[i * dim + i] = 1.0;
  const auto path = dir / ("linear" + std::to_string(dim) + ".phnn");
  nn::save_model(m, path);
  return path;
}

}  // namespace

TEST_CASE("von Mises of uniaxial stress is its magnitude") {
  for (int d : {2, 3}) {
    Tensor2 P(d);
    P(0, 0) = -3.0;
    CHECK(von_mises(Tensor2::identity(d), P) == doctest::Approx(3.0));
    Tensor2 S(d);
    S(0, 1) = S(1, 0) = 2.0;
    CHECK(von_mises(Tensor2::identity(d), S) == doctest::Approx(std::sqrt(3.0) * 2.0));
  }
}

TEST_CASE("comparison norms: self, oracle and mismatch") {
  const auto mesh = fem::generate_mesh("square", fem::ElementType::P1, 0);
  Rng rng(1);
  FieldSet a, b;
  const auto n = static_cast<Eigen::Index>(mesh.node_count());
  a.displacement.resize(n, 2);
  b.displacement.resize(n, 2);
  a.von_mises.resize(n);
  b.von_mises.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 2; ++k) {
      a.displacement(i, k) = rng.uniform(-1, 1);
      b.displacement(i, k) = rng.uniform(-1, 1);
    }
    a.von_mises[i] = rng.uniform(0, 2);
    b.von_mises[i] = rng.uniform(0, 2);
  }
  const auto self = compare_fields(mesh, a, mesh, a);
  CHECK(self.u_l2 == 0.0);
  CHECK(self.u_max == 0.0);
  CHECK(self.vm_l2 == 0.0);
  CHECK(self.vm_max == 0.0);

  double du2 = 0, bu2 = 0, dumax = 0, bumax = 0, dv2 = 0, bv2 = 0, dvmax = 0, bvmax = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 2; ++k) {
      const double d = a.displacement(i, k) - b.displacement(i, k);
      du2 += d * d;
      bu2 += b.displacement(i, k) * b.displacement(i, k);
      dumax = std::max(dumax, std::abs(d));
      bumax = std::max(bumax, std::abs(b.displacement(i, k)));
    }
    const double d = a.von_mises[i] - b.von_mises[i];
    dv2 += d * d;
    bv2 += b.von_mises[i] * b.von_mises[i];
    dvmax = std::max(dvmax, std::abs(d));
    bvmax = std::max(bvmax, std::abs(b.von_mises[i]));
  }
  const auto c = compare_fields(mesh, a, mesh, b);
  CHECK(std::abs(c.u_l2 - std::sqrt(du2 / bu2)) <= 1e-14);
  CHECK(std::abs(c.u_max - dumax / bumax) <= 1e-14);
  CHECK(std::abs(c.vm_l2 - std::sqrt(dv2 / bv2)) <= 1e-14);
  CHECK(std::abs(c.vm_max - dvmax / bvmax) <= 1e-14);

  const auto other = fem::generate_mesh("square", fem::ElementType::P1, 1);
  CHECK_THROWS_AS(compare_fields(mesh, a, other, b), MeshMismatch);
}

TEST_CASE("VTK output is a valid unstructured grid") {
  const auto mesh = fem::generate_mesh("cube", fem::ElementType::P2, 0);
  const auto n = static_cast<Eigen::Index>(mesh.node_count());
  const auto e = static_cast<Eigen::Index>(mesh.element_count());
  const auto text = vtk_mesh(mesh, {{"displacement", Eigen::MatrixXd::Zero(n, 3)}, {"von_mises", Eigen::VectorXd::Ones(n)}},
                             {{"element_vm", Eigen::VectorXd::Ones(e)}});
  const auto s = read_vtk_summary(text);
  CHECK(s.points == mesh.node_count());
  CHECK(s.cells == mesh.element_count());
  CHECK(s.cell_types.front() == 24);
  REQUIRE(s.point_arrays.size() == 2);
  CHECK(s.point_arrays[0].second == 3);
  CHECK(s.cell_arrays.size() == 1);

  const auto net = test::network_2d();
  const auto ns = read_vtk_summary(vtk_network(net, {}, {{"vm", Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.element_count()))}}));
  CHECK(ns.cells == net.element_count());
  CHECK(ns.cell_types.front() == 3);

  CHECK_THROWS_AS(read_vtk_summary(text.substr(0, text.size() / 2)), ParseError);
  CHECK_THROWS_AS(read_vtk_summary("# vtk DataFile Version 3.0\nx\nBINARY\n"), ParseError);
}

TEST_CASE("load cases attach Dirichlet data to every shape") {
  for (const auto& shape : fem::shape_names()) {
    auto mesh = fem::generate_mesh(shape, fem::ElementType::P1, 0);
    apply_load_case(mesh, shape);
    CHECK(!mesh.dirichlet.empty());
    CHECK_NOTHROW(mesh.validate(true));
  }
}

TEST_CASE("square shear with the beam backend") {
  const auto dir = test::scratch_dir("app_beam");
  auto spec = square_spec(BackendKind::beam, test::fixture("rve2d.net"));
  spec.out_dir = dir;
  const auto r = run_fe2(spec);
  CHECK(r.fe2.report.converged);
  CHECK(r.mesh.dof_count() == 50);
  CHECK(r.micro_solves >= r.backend_stress_calls);
  for (const auto& s : r.fe2.report.steps)
    if (s.accepted) CHECK(s.residual_history.back() <= 1e-10 * s.residual_history.front());

  for (const char* f : {"report.json", "mesh.txt", "solution.vtk", "fields.csv", "iterations.csv", "steps.csv"})
    CHECK(std::filesystem::exists(dir / f));
  const auto j = nlohmann::json::parse(read_text_file(dir / "report.json"));
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["config_hash"].get<std::string>().size() == 16);
  CHECK(read_vtk_summary(read_text_file(dir / "solution.vtk")).points == r.mesh.node_count());

  const auto [mesh, fields] = load_run_fields(dir);
  const auto c = compare_fields(mesh, fields, r.mesh, r.fields);
  CHECK(c.u_l2 <= 1e-15);
  CHECK(c.vm_l2 <= 1e-15);
}

TEST_CASE("NN runs never touch the beam solver") {
  const auto dir = test::scratch_dir("app_nn");
  const auto spec = square_spec(BackendKind::nn, linear_nn_file(2, dir));
  const auto r = run_fe2(spec);
  CHECK(r.fe2.report.converged);
  CHECK(r.micro_solves == 0);
  CHECK(r.backend_stress_calls > 0);
}

TEST_CASE("cube torsion runs to completion with monotone load progress") {
  const auto dir = test::scratch_dir("app_cube");
  RunSpec spec;
  spec.shape = "cube";
  spec.element = fem::ElementType::P1;
  spec.backend = BackendKind::beam;
  spec.backend_file = test::fixture("rve3d_small.net");
  const auto r = run_fe2(spec);
  CHECK(r.fe2.report.converged);
  double last = 0.0;
  for (const auto& s : r.fe2.report.steps)
    if (s.accepted) {
      CHECK(s.lambda_end > last);
      last = s.lambda_end;
    }
  CHECK(last == 1.0);
}

TEST_CASE("run spec validation") {
  auto spec = square_spec(BackendKind::beam, "/nonexistent/file.net");
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.backend_file = test::fixture("rve3d_small.net");
  CHECK_THROWS_AS(run_fe2(spec), ValidationError);
  CHECK(backend_from_string("nn") == BackendKind::nn);
  CHECK_THROWS_AS(backend_from_string("fem"), ParseError);
  const auto a = square_spec(BackendKind::beam, test::fixture("rve2d.net"));
  auto b = a;
  CHECK(a.canonical() == b.canonical());
  b.solver.rel_residual_tol = 1e-9;
  CHECK(a.canonical() != b.canonical());
}

TEST_CASE("benchmark with one evaluation reports one sample per backend") {
  nn::MlpModel m(2, {8}, nn::Activation::gelu);
  const auto r = benchmark_backends(test::network_2d(), m, 1);
  CHECK(r.beam_seconds.size() == 1);
  CHECK(r.beam_warm_seconds.size() == 1);
  CHECK(r.nn_seconds.size() == 1);
  CHECK(r.evaluations == 1);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}
