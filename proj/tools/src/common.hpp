#pragma once

#include "porohom/common/tensor.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace porohom::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Where a command writes. --out is a directory; a path with the artifact's
/// extension names the primary file and puts side reports next to it.
struct OutputTarget {
  fs::path dir;
  fs::path primary;

  fs::path file(const std::string& name) const { return dir / name; }
};

OutputTarget resolve_output(const std::string& out, const std::string& default_name);

/// Report envelope: schema version, command name, config and its hash.
json make_report(const std::string& command, const json& config);
void write_json(const fs::path& path, const json& j);

std::vector<double> to_vector(const Eigen::VectorXd& v);

Tensor2 parse_tensor(const std::string& text);
std::vector<int> parse_widths(const std::string& text);

void register_rve(CLI::App& app);
void register_micro(CLI::App& app);
void register_mesh(CLI::App& app);
void register_data(CLI::App& app);
void register_nn(CLI::App& app);
void register_fe2(CLI::App& app);

}  // namespace porohom::cli
