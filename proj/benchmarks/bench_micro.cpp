#include "porohom/common/random.hpp"
#include "porohom/micro/micro_solver.hpp"
#include "porohom/micro/rank_one.hpp"
#include "porohom/rve/network_io.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

namespace {

using namespace porohom;

rve::BeamNetwork fixture(const char* name) {
  return rve::load_network(std::filesystem::path(POROHOM_FIXTURE_DIR) / name);
}

Tensor2 draw_F(Rng& rng, int dim) {
  Tensor2 F = Tensor2::identity(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) F(i, j) += rng.uniform(-0.1, 0.1);
  return F;
}

void BM_RankOneInverse(benchmark::State& state) {
  Rng rng(1);
  SmallVector p(3), q(3);
  for (int i = 0; i < 3; ++i) p[i] = rng.uniform(-0.5, 0.5), q[i] = rng.uniform(-0.5, 0.5);
  const Tensor2 F(SmallMatrix(SmallMatrix::Identity(3, 3) + p * q.transpose()));
  for (auto _ : state) benchmark::DoNotOptimize(micro::rank_one_inverse(F));
}
BENCHMARK(BM_RankOneInverse);

// Factorization included: what a fresh RVE costs.
void BM_MicroSetup(benchmark::State& state, const char* name) {
  const auto net = fixture(name);
  for (auto _ : state) benchmark::DoNotOptimize(micro::MicroSolver(net).reduced_size());
  state.counters["beams"] = static_cast<double>(net.element_count());
}
BENCHMARK_CAPTURE(BM_MicroSetup, rve2d, "rve2d.net")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MicroSetup, rve3d, "rve3d.net")->Unit(benchmark::kMillisecond);

// Stress for one F with the factorization reused.
void BM_MicroStress(benchmark::State& state, const char* name) {
  const micro::MicroSolver s(fixture(name));
  Rng rng(2);
  const auto F = draw_F(rng, s.dim());
  for (auto _ : state) benchmark::DoNotOptimize(s.stress(F));
}
BENCHMARK_CAPTURE(BM_MicroStress, rve2d, "rve2d.net")->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_MicroStress, rve3d, "rve3d.net")->Unit(benchmark::kMicrosecond);

}  // namespace
