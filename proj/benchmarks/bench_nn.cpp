#include "porohom/common/random.hpp"
#include "porohom/nn/mlp.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace porohom;

nn::MlpModel model(int dim, std::vector<int> hidden) {
  nn::MlpModel m(dim, std::move(hidden), nn::Activation::gelu);
  m.initialize(5);
  return m;
}

Tensor2 draw_F(int dim) {
  Rng rng(3);
  Tensor2 F = Tensor2::identity(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) F(i, j) += rng.uniform(-0.1, 0.1);
  return F;
}

void BM_Forward2d(benchmark::State& state) {
  const auto m = model(2, {128, 256, 128});
  const auto F = draw_F(2);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(F));
}
BENCHMARK(BM_Forward2d)->Unit(benchmark::kMicrosecond);

void BM_Jacobian2d(benchmark::State& state) {
  const auto m = model(2, {128, 256, 128});
  const auto F = draw_F(2);
  for (auto _ : state) benchmark::DoNotOptimize(m.jacobian(F));
}
BENCHMARK(BM_Jacobian2d)->Unit(benchmark::kMicrosecond);

void BM_Forward3d(benchmark::State& state) {
  const auto m = model(3, {512, 512});
  const auto F = draw_F(3);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(F));
}
BENCHMARK(BM_Forward3d)->Unit(benchmark::kMicrosecond);

void BM_Jacobian3d(benchmark::State& state) {
  const auto m = model(3, {512, 512});
  const auto F = draw_F(3);
  for (auto _ : state) benchmark::DoNotOptimize(m.jacobian(F));
}
BENCHMARK(BM_Jacobian3d)->Unit(benchmark::kMicrosecond);

}  // namespace
