#pragma once

#include "porohom/fe2/backend.hpp"

#include <string>
#include <vector>

namespace porohom::app {

struct BenchmarkReport {
  int dim = 2;
  int evaluations = 0;
  std::vector<double> beam_seconds;       // cold: solver construction plus solve, per evaluation
  std::vector<double> beam_warm_seconds;  // factorization reused
  std::vector<double> nn_seconds;
  double beam_median = 0.0;
  double beam_warm_median = 0.0;
  double nn_median = 0.0;
  double speedup = 0.0;       // beam_median / nn_median
  double warm_speedup = 0.0;  // beam_warm_median / nn_median
  std::size_t beam_elements = 0;

  std::string to_json(int indent = 2) const;
};

/// Times n_evals stress evaluations of each backend at random F = I + U[-amp, amp]
/// after one untimed warm-up call each, and reports medians.
BenchmarkReport benchmark_backends(const rve::BeamNetwork& network, const nn::MlpModel& model, int n_evals,
                                   std::uint64_t seed = 1, double amplitude = 0.1);

double median(std::vector<double> values);

}  // namespace porohom::app
