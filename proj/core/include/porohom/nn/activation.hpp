#pragma once

#include <cstdint>
#include <string>

namespace porohom::nn {

/// Tags are stored in weight files; do not renumber.
enum class Activation : std::uint8_t { identity = 0, gelu = 1, tanh = 2, sigmoid = 3 };

std::string to_string(Activation a);
/// ParseError for unknown names.
Activation activation_from_string(const std::string& name);

/// Exact GELU x * Phi(x) with the Gaussian CDF from erf.
double gelu(double x);
double activate(Activation a, double x);
double activate_derivative(Activation a, double x);

}  // namespace porohom::nn
