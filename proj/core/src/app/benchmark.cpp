#include "porohom/app/benchmark.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>

namespace porohom::app {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

namespace {

template <typename Fn>
double time_once(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BenchmarkReport benchmark_backends(const rve::BeamNetwork& network, const nn::MlpModel& model, int n_evals,
                                   std::uint64_t seed, double amplitude) {
  if (n_evals < 1) throw ValidationError("at least one evaluation is required");
  if (network.dim != model.dim()) throw ShapeMismatch("network and model dimensions differ");
  const int d = network.dim;
  Rng rng(seed);
  std::vector<Tensor2> Fs;
  for (int i = 0; i < n_evals + 1; ++i) {
    Tensor2 F = Tensor2::identity(d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) F(r, c) += rng.uniform(-amplitude, amplitude);
    }
    Fs.push_back(F);
  }

  BenchmarkReport rep;
  rep.dim = d;
  rep.evaluations = n_evals;
  rep.beam_elements = network.elements.size();
  volatile double sink = 0.0;

  // Cold beam solve: assembly, factorization and solve, as one RVE evaluation from scratch.
  sink = sink + micro::MicroSolver(network).stress(Fs[0])(0, 0);
  for (int i = 1; i <= n_evals; ++i) {
    rep.beam_seconds.push_back(time_once([&] { sink = sink + micro::MicroSolver(network).stress(Fs[i])(0, 0); }));
  }
  const micro::MicroSolver warm(network);
  sink = sink + warm.stress(Fs[0])(0, 0);
  for (int i = 1; i <= n_evals; ++i) {
    rep.beam_warm_seconds.push_back(time_once([&] { sink = sink + warm.stress(Fs[i])(0, 0); }));
  }
  sink = sink + model.forward(Fs[0])(0, 0);
  for (int i = 1; i <= n_evals; ++i) {
    rep.nn_seconds.push_back(time_once([&] { sink = sink + model.forward(Fs[i])(0, 0); }));
  }
  rep.beam_median = median(rep.beam_seconds);
  rep.beam_warm_median = median(rep.beam_warm_seconds);
  rep.nn_median = median(rep.nn_seconds);
  rep.speedup = rep.nn_median > 0.0 ? rep.beam_median / rep.nn_median : 0.0;
  rep.warm_speedup = rep.nn_median > 0.0 ? rep.beam_warm_median / rep.nn_median : 0.0;
  return rep;
}

std::string BenchmarkReport::to_json(int indent) const {
  nlohmann::json j{{"dim", dim},
                   {"evaluations", evaluations},
                   {"beam_elements", beam_elements},
                   {"beam_cold_median_s", beam_median},
                   {"beam_warm_median_s", beam_warm_median},
                   {"nn_median_s", nn_median},
                   {"speedup", speedup},
                   {"warm_speedup", warm_speedup},
                   {"protocol", "one untimed warm-up call per backend; medians over the timed calls"}};
  return j.dump(indent);
}

}  // namespace porohom::app
