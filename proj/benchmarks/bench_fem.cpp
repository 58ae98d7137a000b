#include "porohom/fem/assembler.hpp"
#include "porohom/fem/generators.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace porohom;

// Saint Venant-Kirchhoff with unit moduli; cheap enough that assembly dominates.
fem::ConstitutiveCallback svk() {
  fem::ConstitutiveCallback cb;
  cb.stress = [](const Tensor2& F) {
    const int d = F.dim();
    const SmallMatrix E = 0.5 * (F.matrix().transpose() * F.matrix() - SmallMatrix::Identity(d, d));
    return Tensor2(SmallMatrix(F.matrix() * (E.trace() * SmallMatrix::Identity(d, d) + 2.0 * E)));
  };
  cb.tangent = [](const Tensor2& F) { return Eigen::MatrixXd::Identity(F.size(), F.size()); };
  return cb;
}

Eigen::VectorXd field(const fem::Assembler& A) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(A.dof_count()));
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = 0.01 * std::sin(0.3 * static_cast<double>(i));
  return u;
}

// Argument: refinement level of the square P1 mesh.
void BM_Residual(benchmark::State& state) {
  const fem::Assembler A(fem::generate_mesh("square", fem::ElementType::P1, static_cast<int>(state.range(0))));
  const auto u = field(A);
  const auto cb = svk();
  for (auto _ : state) benchmark::DoNotOptimize(A.residual(u, cb));
  state.counters["dofs"] = static_cast<double>(A.dof_count());
}
BENCHMARK(BM_Residual)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_Tangent(benchmark::State& state) {
  const fem::Assembler A(fem::generate_mesh("square", fem::ElementType::P1, static_cast<int>(state.range(0))));
  const auto u = field(A);
  const auto cb = svk();
  for (auto _ : state) benchmark::DoNotOptimize(A.tangent(u, cb));
  state.counters["dofs"] = static_cast<double>(A.dof_count());
}
BENCHMARK(BM_Tangent)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

}  // namespace
