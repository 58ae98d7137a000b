#pragma once

#include "porohom/rve/distribution.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace porohom::rve {

/// How the distribution weights translate into disk counts.
enum class WeightMode {
  volume,  // weight = share of total disk area
  count,   // weight = share of disk number
};

struct PackingConfig {
  WeightMode mode = WeightMode::volume;
  double target_fraction = 0.35;  // disk area / domain area (volume mode)
  std::size_t target_count = 100;  // total disks (count mode)
  double overlap_tol = 1e-9;       // relative to domain_edge
  double fraction_tolerance = 0.1; // relative tolerance on the achieved fraction
};

struct SpherePacking {
  std::vector<Eigen::Vector2d> centers;
  std::vector<double> radii;
  double domain_edge = 1.0;

  std::size_t size() const { return radii.size(); }
  double area_fraction() const;
};

/// Random sequential addition on the periodic square, largest disks first.
/// max_attempts bounds the trials per disk; PackingFailed when exhausted.
SpherePacking pack_disks(const PoreSizeDistribution& dist, std::uint64_t seed,
                         std::uint64_t max_attempts, const PackingConfig& config = {});

/// Disk counts per distribution class implied by the config.
std::vector<std::size_t> class_counts(const PoreSizeDistribution& dist, const PackingConfig& config);

/// Smallest periodic gap |ci - cj| - ri - rj over all pairs (exhaustive).
double min_periodic_gap(const SpherePacking& packing);

/// Share of disk area per class of dist, matched by diameter.
std::vector<double> area_histogram(const SpherePacking& packing, const PoreSizeDistribution& dist);

}  // namespace porohom::rve
