#include "common.hpp"

#include "porohom/app/run.hpp"
#include "porohom/common/error.hpp"
#include "porohom/common/hash.hpp"
#include "porohom/common/io.hpp"

#include <cmath>
#include <sstream>

namespace porohom::cli {

OutputTarget resolve_output(const std::string& out, const std::string& default_name) {
  if (out.empty()) throw ValidationError("--out is required");
  fs::path p(out);
  const auto ext = fs::path(default_name).extension();
  OutputTarget t;
  if (!ext.empty() && p.extension() == ext) {
    t.dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    t.primary = p;
  } else {
    t.dir = p;
    t.primary = p / default_name;
  }
  fs::create_directories(t.dir);
  return t;
}

json make_report(const std::string& command, const json& config) {
  json j;
  j["schema_version"] = app::kReportSchemaVersion;
  j["command"] = command;
  j["config"] = config;
  j["config_hash"] = fnv1a_hex(config.dump());
  return j;
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Tensor2 parse_tensor(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad tensor component '" + item + "'");
    }
  }
  int dim = 0;
  if (v.size() == 4) dim = 2;
  if (v.size() == 9) dim = 3;
  if (dim == 0) throw ParseError("--F needs 4 or 9 comma-separated values, got " + std::to_string(v.size()));
  return Tensor2::from_flat(dim, v);
}

std::vector<int> parse_widths(const std::string& text) {
  std::vector<int> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      w.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ParseError("bad layer width '" + item + "'");
    }
    if (w.back() <= 0) throw ValidationError("layer widths must be positive");
  }
  if (w.empty()) throw ValidationError("--arch needs at least one hidden layer");
  return w;
}

}  // namespace porohom::cli
