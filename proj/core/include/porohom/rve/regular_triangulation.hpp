#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace porohom::rve {

/// A weighted site in the plane. Weight is the squared radius for power diagrams
/// and zero for an ordinary Delaunay triangulation.
struct WeightedSite {
  double x = 0.0;
  double y = 0.0;
  double weight = 0.0;
};

/// 2D regular triangulation (weighted Delaunay) by incremental insertion.
///
/// A triangle is kept when no other site lies strictly inside its orthogonal
/// circle, which is the lifted-paraboloid orientation test applied to points
/// (x, y, x^2 + y^2 - w). The dual of the result is the power diagram.
///
/// Sites whose power cell is empty (redundant sites) are skipped and reported.
/// Co-circular configurations are triangulated arbitrarily; their dual edges
/// have zero length.
class RegularTriangulation {
 public:
  explicit RegularTriangulation(std::vector<WeightedSite> sites,
                                std::span<const std::size_t> insertion_order = {});

  const std::vector<WeightedSite>& sites() const { return sites_; }

  /// Finite triangles, counter-clockwise, indices into sites().
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

  /// neighbors()[t][i] is the triangle across the edge opposite vertex i, or -1.
  const std::vector<std::array<int, 3>>& neighbors() const { return neighbors_; }

  /// Orthocenter (power-equidistant point) of triangle t.
  Eigen::Vector2d orthocenter(std::size_t t) const;

  const std::vector<bool>& redundant() const { return redundant_; }

  /// Power distance |p - c|^2 - w of point p to site i.
  double power(std::size_t site, const Eigen::Vector2d& p) const;

 private:
  std::vector<WeightedSite> sites_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<bool> redundant_;
};

/// Sign of the lifted orientation test: positive when d lies strictly inside
/// the orthogonal circle of the counter-clockwise triangle (a, b, c).
double power_test(const WeightedSite& a, const WeightedSite& b, const WeightedSite& c,
                  const WeightedSite& d);

/// Twice the signed area of (a, b, c); positive for counter-clockwise order.
double orient2d(double ax, double ay, double bx, double by, double cx, double cy);

}  // namespace porohom::rve
