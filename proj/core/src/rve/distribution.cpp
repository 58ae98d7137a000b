#include "porohom/rve/distribution.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace porohom::rve {

void PoreSizeDistribution::validate() const {
  if (entries.empty()) throw ValidationError("distribution: no entries");
  if (!(domain_edge > 0.0) || !std::isfinite(domain_edge)) {
    throw ValidationError("distribution: domain_edge must be positive");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!(e.diameter > 0.0)) {
      throw ValidationError("distribution: entry " + std::to_string(k) + " has non-positive diameter");
    }
    if (!(e.weight >= 0.0)) {
      throw ValidationError("distribution: entry " + std::to_string(k) + " has negative weight");
    }
    if (k > 0 && !(e.diameter > entries[k - 1].diameter)) {
      throw ValidationError("distribution: diameters must be strictly increasing (entry " +
                            std::to_string(k) + ")");
    }
    sum += e.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << std::setprecision(17) << "distribution: weights sum to " << sum << ", expected 1";
    throw ValidationError(os.str());
  }
}

PoreSizeDistribution PoreSizeDistribution::parse(const std::string& text) {
  PoreSizeDistribution dist;
  LineReader reader(text, "distribution");
  bool have_edge = false;
  while (!reader.done()) {
    auto line = reader.next();
    std::string first;
    line >> first;
    if (first == "edge") {
      if (!(line >> dist.domain_edge)) reader.fail("edge needs a value");
      have_edge = true;
      continue;
    }
    PoreClass c;
    try {
      std::size_t used = 0;
      c.diameter = std::stod(first, &used);
      if (used != first.size()) reader.fail("bad diameter '" + first + "'");
    } catch (const std::logic_error&) {
      reader.fail("bad diameter '" + first + "'");
    }
    if (!(line >> c.weight)) reader.fail("missing weight");
    dist.entries.push_back(c);
  }
  if (!have_edge) dist.domain_edge = 1.0;
  dist.validate();
  return dist;
}

PoreSizeDistribution PoreSizeDistribution::load(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

std::string PoreSizeDistribution::to_string() const {
  std::ostringstream os;
  os << std::setprecision(17) << "edge " << domain_edge << "\n";
  for (const auto& e : entries) os << e.diameter << " " << e.weight << "\n";
  return os.str();
}

}  // namespace porohom::rve
