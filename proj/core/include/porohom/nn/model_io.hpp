#pragma once

#include "porohom/nn/mlp.hpp"

#include <filesystem>
#include <string>

namespace porohom::nn {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Layout (little-endian):
///   "PHNN", u32 version, u32 dim, u32 hidden count h, u32 widths[h],
///   u8 activation tags[h + 1] (last is the output layer),
///   per layer: f64 W (row-major, out x in), f64 b,
///   f64 input mean[d^2], input scale[d^2], output mean[d^2], output scale[d^2].
std::string serialize_model(const MlpModel& model);

/// ParseError on bad magic, truncation or trailing bytes. VersionMismatch for an
/// unknown version, or when expected_dim is non-zero and differs from the file.
MlpModel deserialize_model(const std::string& bytes, int expected_dim = 0, const std::string& source = "model");

void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path, int expected_dim = 0);

}  // namespace porohom::nn
