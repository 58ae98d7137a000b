#include "porohom/rve/tessellation.hpp"

#include "porohom/common/error.hpp"
#include "porohom/rve/regular_triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace porohom::rve {

namespace {

// Liang-Barsky clip of segment ab to [0, L]^2. Returns false when nothing remains.
bool clip_segment(Eigen::Vector2d& a, Eigen::Vector2d& b, double L) {
  const Eigen::Vector2d d = b - a;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x(), L - a.x(), a.y(), L - a.y()};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  const Eigen::Vector2d a0 = a;
  a = a0 + t0 * d;
  b = a0 + t1 * d;
  return true;
}

double snap(double x, double L, double tol) {
  if (std::abs(x) <= tol) return 0.0;
  if (std::abs(x - L) <= tol) return L;
  return std::clamp(x, 0.0, L);
}

class PointMerger {
 public:
  PointMerger(double tol) : tol_(tol) {}

  int add(const Eigen::Vector2d& p) {
    const auto cx = static_cast<long long>(std::floor(p.x() / tol_));
    const auto cy = static_cast<long long>(std::floor(p.y() / tol_));
    for (long long ix = cx - 1; ix <= cx + 1; ++ix) {
      for (long long iy = cy - 1; iy <= cy + 1; ++iy) {
        const auto it = grid_.find(key(ix, iy));
        if (it == grid_.end()) continue;
        for (int id : it->second) {
          if ((points_[static_cast<std::size_t>(id)] - p).norm() <= tol_) return id;
        }
      }
    }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    grid_[key(cx, cy)].push_back(id);
    return id;
  }

  const std::vector<Eigen::Vector2d>& points() const { return points_; }

 private:
  static long long key(long long ix, long long iy) { return ix * 2000003LL + iy; }

  double tol_;
  std::vector<Eigen::Vector2d> points_;
  std::unordered_map<long long, std::vector<int>> grid_;
};

}  // namespace

BeamNetwork tessellate_periodic(const SpherePacking& packing, const TessellationConfig& config) {
  const double L = packing.domain_edge;
  const double tol = config.collapse_tol * L;
  if (packing.size() == 0) throw DegenerateTessellation("empty packing");

  std::vector<WeightedSite> sites;
  sites.reserve(9 * packing.size());
  for (int sx = -1; sx <= 1; ++sx) {
    for (int sy = -1; sy <= 1; ++sy) {
      for (std::size_t i = 0; i < packing.size(); ++i) {
        const auto& c = packing.centers[i];
        const double r = packing.radii[i];
        sites.push_back({c.x() + sx * L, c.y() + sy * L, r * r});
      }
    }
  }
  const RegularTriangulation tri(std::move(sites));

  // Dual edges between orthocentres of adjacent triangles, clipped to the cell.
  PointMerger merger(tol);
  std::vector<std::array<int, 2>> raw_edges;
  const auto& tris = tri.triangles();
  const auto& nbrs = tri.neighbors();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int n = nbrs[t][static_cast<std::size_t>(k)];
      if (n < 0 || static_cast<std::size_t>(n) < t) continue;
      Eigen::Vector2d a = tri.orthocenter(t);
      Eigen::Vector2d b = tri.orthocenter(static_cast<std::size_t>(n));
      if (!clip_segment(a, b, L)) continue;
      a = {snap(a.x(), L, tol), snap(a.y(), L, tol)};
      b = {snap(b.x(), L, tol), snap(b.y(), L, tol)};
      raw_edges.push_back({merger.add(a), merger.add(b)});
    }
  }

  const auto& pts = merger.points();
  auto on_plus_face = [&](int i, int axis) { return pts[static_cast<std::size_t>(i)][axis] == L; };

  // Drop collapsed edges, edges on the + faces (images of - face edges) and duplicates.
  std::set<std::pair<int, int>> edge_set;
  std::vector<std::array<int, 2>> edges;
  for (const auto& e : raw_edges) {
    if (e[0] == e[1]) continue;
    if ((on_plus_face(e[0], 0) && on_plus_face(e[1], 0)) || (on_plus_face(e[0], 1) && on_plus_face(e[1], 1))) continue;
    const auto key = std::minmax(e[0], e[1]);
    if (!edge_set.insert(key).second) continue;
    edges.push_back(e);
  }

  // Renumber, keeping only referenced nodes.
  std::vector<int> remap(pts.size(), -1);
  BeamNetwork net;
  net.dim = 2;
  net.domain_edge = L;
  net.material = Material::defaults(L);
  for (auto& e : edges) {
    for (int& v : e) {
      if (remap[static_cast<std::size_t>(v)] < 0) {
        remap[static_cast<std::size_t>(v)] = static_cast<int>(net.nodes.size());
        const auto& p = pts[static_cast<std::size_t>(v)];
        net.nodes.emplace_back(p.x(), p.y(), 0.0);
      }
      v = remap[static_cast<std::size_t>(v)];
    }
    net.elements.push_back(e);
  }
  if (net.elements.empty()) throw DegenerateTessellation("no cell edges inside the domain");

  // Pair + face nodes with their - face images and snap them exactly.
  for (int axis = 0; axis < 2; ++axis) {
    const int other = 1 - axis;
    std::multimap<double, int> minus;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      if (net.nodes[i][axis] == 0.0) minus.emplace(net.nodes[i][other], static_cast<int>(i));
    }
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      auto& p = net.nodes[i];
      if (p[axis] != L) continue;
      int best = -1;
      double best_d = tol;
      for (auto it = minus.lower_bound(p[other] - tol); it != minus.end() && it->first <= p[other] + tol; ++it) {
        const double d = std::abs(it->first - p[other]);
        if (d <= best_d) {
          best_d = d;
          best = it->second;
        }
      }
      if (best < 0) {
        throw DegenerateTessellation("boundary node " + std::to_string(i) + " has no periodic image on the opposite face");
      }
      p[other] = net.nodes[static_cast<std::size_t>(best)][other];
      net.periodic_pairs.push_back({static_cast<int>(i), best, axis});
    }
  }

  // Corners: a node at the corner if present, else the nearest boundary node.
  const Eigen::Vector3d corners[4] = {{0, 0, 0}, {L, 0, 0}, {0, L, 0}, {L, L, 0}};
  for (const auto& c : corners) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      const auto& p = net.nodes[i];
      const double d = (p - c).norm();
      const bool boundary = p.x() == 0.0 || p.x() == L || p.y() == 0.0 || p.y() == L;
      if (d <= tol) {
        best = static_cast<int>(i);
        break;
      }
      if (boundary && d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) throw DegenerateTessellation("no boundary node available for a corner");
    net.corner_nodes.push_back(best);
  }

  try {
    net.validate();
  } catch (const ValidationError& e) {
    throw DegenerateTessellation(std::string("tessellation produced an invalid network: ") + e.what());
  }
  return net;
}

}  // namespace porohom::rve
