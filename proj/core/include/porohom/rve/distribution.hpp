#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace porohom::rve {

struct PoreClass {
  double diameter = 0.0;
  double weight = 0.0;
};

/// Discrete pore-size distribution on a square (cube) domain.
struct PoreSizeDistribution {
  std::vector<PoreClass> entries;
  double domain_edge = 1.0;

  /// Throws ValidationError unless weights sum to one and diameters increase.
  void validate() const;

  /// Text form: an `edge <L>` line, then `<diameter> <weight>` lines. `#` starts a comment.
  static PoreSizeDistribution parse(const std::string& text);
  static PoreSizeDistribution load(const std::filesystem::path& path);
  std::string to_string() const;
};

}  // namespace porohom::rve
