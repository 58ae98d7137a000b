#pragma once

#include "porohom/rve/beam_network.hpp"

#include <filesystem>
#include <string>

namespace porohom::rve {

// Text format:
//   dim nN nB nP nC
//   nN lines  x y [z]
//   nB lines  i j
//   nP lines  plus minus axis
//   nC lines  node
//   E nu A I edge
// Indices are 0-based; '#' starts a comment.

BeamNetwork parse_network(const std::string& text);
std::string format_network(const BeamNetwork& network);

BeamNetwork load_network(const std::filesystem::path& path);
void save_network(const BeamNetwork& network, const std::filesystem::path& path);

}  // namespace porohom::rve
