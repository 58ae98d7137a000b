#include "porohom/rve/packing.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace porohom::rve {

namespace {

double periodic_delta(double d, double edge) { return d - edge * std::round(d / edge); }

double periodic_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double edge) {
  return std::hypot(periodic_delta(a.x() - b.x(), edge), periodic_delta(a.y() - b.y(), edge));
}

}  // namespace

double SpherePacking::area_fraction() const {
  double area = 0.0;
  for (double r : radii) area += std::numbers::pi * r * r;
  return area / (domain_edge * domain_edge);
}

std::vector<std::size_t> class_counts(const PoreSizeDistribution& dist, const PackingConfig& config) {
  dist.validate();
  std::vector<std::size_t> counts(dist.entries.size(), 0);
  const double domain_area = dist.domain_edge * dist.domain_edge;
  std::size_t total = 0;
  for (std::size_t k = 0; k < dist.entries.size(); ++k) {
    const auto& e = dist.entries[k];
    double n = 0.0;
    if (config.mode == WeightMode::volume) {
      const double disk_area = std::numbers::pi * 0.25 * e.diameter * e.diameter;
      n = e.weight * config.target_fraction * domain_area / disk_area;
    } else {
      n = e.weight * static_cast<double>(config.target_count);
    }
    counts[k] = static_cast<std::size_t>(std::llround(n));
    total += counts[k];
  }
  if (total == 0) {
    // Always place at least one disk of the most likely class.
    std::size_t best = 0;
    for (std::size_t k = 1; k < dist.entries.size(); ++k) {
      if (dist.entries[k].weight > dist.entries[best].weight) best = k;
    }
    counts[best] = 1;
  }
  return counts;
}

SpherePacking pack_disks(const PoreSizeDistribution& dist, std::uint64_t seed, std::uint64_t max_attempts,
                         const PackingConfig& config) {
  if (max_attempts < 1) throw ValidationError("pack_disks: max_attempts must be >= 1");
  const auto counts = class_counts(dist, config);
  const double edge = dist.domain_edge;

  SpherePacking packing;
  packing.domain_edge = edge;
  Rng rng(seed);

  for (std::size_t k = dist.entries.size(); k-- > 0;) {
    const double r = 0.5 * dist.entries[k].diameter;
    if (2.0 * r > edge) {
      throw PackingFailed("pore diameter " + std::to_string(dist.entries[k].diameter) +
                          " exceeds the domain edge");
    }
    for (std::size_t n = 0; n < counts[k]; ++n) {
      bool placed = false;
      for (std::uint64_t attempt = 0; attempt < max_attempts && !placed; ++attempt) {
        const Eigen::Vector2d c(rng.uniform(0.0, edge), rng.uniform(0.0, edge));
        bool free = true;
        for (std::size_t j = 0; j < packing.radii.size() && free; ++j) {
          // Strict gap so that independent checks with tolerance always pass.
          free = periodic_distance(c, packing.centers[j], edge) > r + packing.radii[j];
        }
        if (free) {
          packing.centers.push_back(c);
          packing.radii.push_back(r);
          placed = true;
        }
      }
      if (!placed) {
        throw PackingFailed("could not place disk " + std::to_string(packing.size() + 1) + " of diameter " +
                            std::to_string(2.0 * r) + " within " + std::to_string(max_attempts) +
                            " attempts (" + std::to_string(packing.size()) + " placed)");
      }
    }
  }

  if (config.mode == WeightMode::volume && packing.size() >= 50) {
    const double achieved = packing.area_fraction();
    if (std::abs(achieved - config.target_fraction) > config.fraction_tolerance * config.target_fraction) {
      throw PackingFailed("achieved area fraction " + std::to_string(achieved) + " misses target " +
                          std::to_string(config.target_fraction));
    }
  }
  return packing;
}

double min_periodic_gap(const SpherePacking& packing) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < packing.size(); ++i) {
    for (std::size_t j = i + 1; j < packing.size(); ++j) {
      const double d = periodic_distance(packing.centers[i], packing.centers[j], packing.domain_edge);
      gap = std::min(gap, d - packing.radii[i] - packing.radii[j]);
    }
  }
  return gap;
}

std::vector<double> area_histogram(const SpherePacking& packing, const PoreSizeDistribution& dist) {
  std::vector<double> hist(dist.entries.size(), 0.0);
  double total = 0.0;
  for (double r : packing.radii) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < dist.entries.size(); ++k) {
      if (std::abs(dist.entries[k].diameter - 2.0 * r) < std::abs(dist.entries[best].diameter - 2.0 * r)) best = k;
    }
    const double a = r * r;
    hist[best] += a;
    total += a;
  }
  if (total > 0.0) {
    for (double& h : hist) h /= total;
  }
  return hist;
}

}  // namespace porohom::rve
