#include "porohom/rve/regular_triangulation.hpp"

#include "porohom/common/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace porohom::rve {

double orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  const long double abx = static_cast<long double>(bx) - ax;
  const long double aby = static_cast<long double>(by) - ay;
  const long double acx = static_cast<long double>(cx) - ax;
  const long double acy = static_cast<long double>(cy) - ay;
  return static_cast<double>(abx * acy - aby * acx);
}

double power_test(const WeightedSite& a, const WeightedSite& b, const WeightedSite& c,
                  const WeightedSite& d) {
  using LD = long double;
  const LD adx = static_cast<LD>(a.x) - d.x, ady = static_cast<LD>(a.y) - d.y;
  const LD bdx = static_cast<LD>(b.x) - d.x, bdy = static_cast<LD>(b.y) - d.y;
  const LD cdx = static_cast<LD>(c.x) - d.x, cdy = static_cast<LD>(c.y) - d.y;
  const LD alift = adx * adx + ady * ady - static_cast<LD>(a.weight) + d.weight;
  const LD blift = bdx * bdx + bdy * bdy - static_cast<LD>(b.weight) + d.weight;
  const LD clift = cdx * cdx + cdy * cdy - static_cast<LD>(c.weight) + d.weight;
  const LD det = adx * (bdy * clift - blift * cdy) - ady * (bdx * clift - blift * cdx) +
                 alift * (bdx * cdy - bdy * cdx);
  return static_cast<double>(det);
}

namespace {

struct Triangle {
  std::array<int, 3> v{};
  std::array<int, 3> nbr{-1, -1, -1};
  bool alive = true;
};

class Builder {
 public:
  explicit Builder(std::vector<WeightedSite>& sites) : sites_(sites) {}

  void add_super_triangle() {
    double xmin = std::numeric_limits<double>::max(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (const auto& s : sites_) {
      xmin = std::min(xmin, s.x);
      xmax = std::max(xmax, s.x);
      ymin = std::min(ymin, s.y);
      ymax = std::max(ymax, s.y);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    const double r = 64.0 * span;
    super_base_ = static_cast<int>(sites_.size());
    sites_.push_back({cx - 2.0 * r, cy - r, 0.0});
    sites_.push_back({cx + 2.0 * r, cy - r, 0.0});
    sites_.push_back({cx, cy + 2.0 * r, 0.0});
    Triangle t;
    t.v = {super_base_, super_base_ + 1, super_base_ + 2};
    tris_.push_back(t);
    last_ = 0;
  }

  bool is_super(int v) const { return v >= super_base_; }
  int super_base() const { return super_base_; }

  bool conflicts(int t, int p) const {
    const auto& v = tris_[static_cast<std::size_t>(t)].v;
    return power_test(site(v[0]), site(v[1]), site(v[2]), site(p)) > 0.0;
  }

  // Returns false when the site is redundant (no conflicting triangle).
  bool insert(int p) {
    const int start = locate(p);
    if (start < 0 || !conflicts(start, p)) return false;

    // Conflict region by breadth-first search from the containing triangle.
    std::vector<int> cavity{start};
    in_cavity_.assign(tris_.size(), 0);
    in_cavity_[static_cast<std::size_t>(start)] = 1;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const auto& t = tris_[static_cast<std::size_t>(cavity[k])];
      for (int n : t.nbr) {
        if (n < 0 || in_cavity_[static_cast<std::size_t>(n)]) continue;
        if (conflicts(n, p)) {
          in_cavity_[static_cast<std::size_t>(n)] = 1;
          cavity.push_back(n);
        }
      }
    }

    struct BoundaryEdge {
      int a, b, outside;
    };
    std::vector<BoundaryEdge> boundary;
    // Degenerate (co-circular or collinear) input can leave the cavity not
    // star-shaped around p; grow it across offending edges until it is.
    for (bool grown = true; grown;) {
      grown = false;
      boundary.clear();
      for (int ti : cavity) {
        const auto& t = tris_[static_cast<std::size_t>(ti)];
        for (int i = 0; i < 3; ++i) {
          const int n = t.nbr[static_cast<std::size_t>(i)];
          if (n >= 0 && in_cavity_[static_cast<std::size_t>(n)]) continue;
          boundary.push_back({t.v[static_cast<std::size_t>((i + 1) % 3)],
                              t.v[static_cast<std::size_t>((i + 2) % 3)], n});
        }
      }
      for (const auto& e : boundary) {
        if (orient2d(site(e.a).x, site(e.a).y, site(e.b).x, site(e.b).y, site(p).x, site(p).y) > 0.0) continue;
        if (e.outside < 0) throw DegenerateTessellation("inserted site lies on the hull of the triangulation");
        in_cavity_[static_cast<std::size_t>(e.outside)] = 1;
        cavity.push_back(e.outside);
        grown = true;
        break;
      }
    }
    for (int ti : cavity) tris_[static_cast<std::size_t>(ti)].alive = false;

    // New fan of triangles (a, b, p); link them to the outside and to each other.
    std::unordered_map<int, int> by_start, by_end;
    by_start.reserve(boundary.size() * 2);
    by_end.reserve(boundary.size() * 2);
    std::vector<int> created;
    created.reserve(boundary.size());
    for (const auto& e : boundary) {
      Triangle t;
      t.v = {e.a, e.b, p};
      t.nbr[2] = e.outside;
      const int id = static_cast<int>(tris_.size());
      tris_.push_back(t);
      created.push_back(id);
      by_start[e.a] = id;
      by_end[e.b] = id;
      if (e.outside >= 0) {
        auto& o = tris_[static_cast<std::size_t>(e.outside)];
        for (int i = 0; i < 3; ++i) {
          const int oa = o.v[static_cast<std::size_t>((i + 1) % 3)];
          const int ob = o.v[static_cast<std::size_t>((i + 2) % 3)];
          if (oa == e.b && ob == e.a) o.nbr[static_cast<std::size_t>(i)] = id;
        }
      }
    }
    for (int id : created) {
      auto& t = tris_[static_cast<std::size_t>(id)];
      const int a = t.v[0], b = t.v[1];
      // Edge (b, p) is opposite a; shared with the triangle starting at b.
      const auto sb = by_start.find(b);
      const auto ea = by_end.find(a);
      if (sb == by_start.end() || ea == by_end.end()) {
        throw DegenerateTessellation("cavity boundary is not a closed cycle");
      }
      t.nbr[0] = sb->second;
      t.nbr[1] = ea->second;
    }
    last_ = created.front();
    return true;
  }

  const std::vector<Triangle>& triangles() const { return tris_; }
  const WeightedSite& site(int i) const { return sites_[static_cast<std::size_t>(i)]; }

 private:
  bool contains(int t, int p) const {
    const auto& v = tris_[static_cast<std::size_t>(t)].v;
    const auto& q = site(p);
    for (int i = 0; i < 3; ++i) {
      const auto& a = site(v[static_cast<std::size_t>((i + 1) % 3)]);
      const auto& b = site(v[static_cast<std::size_t>((i + 2) % 3)]);
      if (orient2d(a.x, a.y, b.x, b.y, q.x, q.y) < 0.0) return false;
    }
    return true;
  }

  int locate(int p) {
    int t = last_;
    if (t < 0 || !tris_[static_cast<std::size_t>(t)].alive) t = any_alive();
    const auto& q = site(p);
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const auto& tri = tris_[static_cast<std::size_t>(t)];
      int next = -1;
      // Rotate the starting edge to avoid cycling on degenerate input.
      const int offset = static_cast<int>(step % 3);
      for (int k = 0; k < 3; ++k) {
        const int i = (k + offset) % 3;
        const auto& a = site(tri.v[static_cast<std::size_t>((i + 1) % 3)]);
        const auto& b = site(tri.v[static_cast<std::size_t>((i + 2) % 3)]);
        if (orient2d(a.x, a.y, b.x, b.y, q.x, q.y) < 0.0) {
          next = tri.nbr[static_cast<std::size_t>(i)];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      if (tris_[i].alive && contains(static_cast<int>(i), p)) return static_cast<int>(i);
    }
    return -1;
  }

  int any_alive() const {
    for (std::size_t i = tris_.size(); i-- > 0;) {
      if (tris_[i].alive) return static_cast<int>(i);
    }
    return -1;
  }

  std::vector<WeightedSite>& sites_;
  std::vector<Triangle> tris_;
  std::vector<char> in_cavity_;
  int super_base_ = 0;
  int last_ = -1;
};

}  // namespace

RegularTriangulation::RegularTriangulation(std::vector<WeightedSite> sites,
                                           std::span<const std::size_t> insertion_order)
    : sites_(std::move(sites)), redundant_(sites_.size(), false) {
  const std::size_t n = sites_.size();
  if (n < 3) throw DegenerateTessellation("regular triangulation needs at least three sites");

  std::vector<WeightedSite> work = sites_;
  Builder builder(work);
  builder.add_super_triangle();

  std::vector<std::size_t> order;
  if (insertion_order.empty()) {
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
  } else {
    order.assign(insertion_order.begin(), insertion_order.end());
  }
  for (std::size_t i : order) {
    if (!builder.insert(static_cast<int>(i))) redundant_[i] = true;
  }

  // Compact to finite triangles and rebuild adjacency on the compacted set.
  const auto& tris = builder.triangles();
  std::vector<int> remap(tris.size(), -1);
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const auto& t = tris[i];
    if (!t.alive) continue;
    if (builder.is_super(t.v[0]) || builder.is_super(t.v[1]) || builder.is_super(t.v[2])) continue;
    const double area = orient2d(work[static_cast<std::size_t>(t.v[0])].x, work[static_cast<std::size_t>(t.v[0])].y,
                                 work[static_cast<std::size_t>(t.v[1])].x, work[static_cast<std::size_t>(t.v[1])].y,
                                 work[static_cast<std::size_t>(t.v[2])].x, work[static_cast<std::size_t>(t.v[2])].y);
    if (area <= 0.0) continue;
    remap[i] = static_cast<int>(triangles_.size());
    triangles_.push_back(t.v);
  }
  // Sites removed from the triangulation by later insertions are redundant too.
  std::vector<bool> used(n, false);
  for (const auto& t : tris) {
    if (!t.alive) continue;
    for (int v : t.v) {
      if (!builder.is_super(v)) used[static_cast<std::size_t>(v)] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) redundant_[i] = true;
  }
  neighbors_.assign(triangles_.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (remap[i] < 0) continue;
    for (int k = 0; k < 3; ++k) {
      const int n = tris[i].nbr[static_cast<std::size_t>(k)];
      neighbors_[static_cast<std::size_t>(remap[i])][static_cast<std::size_t>(k)] =
          n >= 0 ? remap[static_cast<std::size_t>(n)] : -1;
    }
  }
}

Eigen::Vector2d RegularTriangulation::orthocenter(std::size_t t) const {
  const auto& v = triangles_.at(t);
  const auto& a = sites_[static_cast<std::size_t>(v[0])];
  const auto& b = sites_[static_cast<std::size_t>(v[1])];
  const auto& c = sites_[static_cast<std::size_t>(v[2])];
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double rb = 0.5 * (bx * bx + by * by - b.weight + a.weight);
  const double rc = 0.5 * (cx * cx + cy * cy - c.weight + a.weight);
  const double det = bx * cy - by * cx;
  return {a.x + (rb * cy - rc * by) / det, a.y + (bx * rc - cx * rb) / det};
}

double RegularTriangulation::power(std::size_t site, const Eigen::Vector2d& p) const {
  const auto& s = sites_.at(site);
  const double dx = p.x() - s.x, dy = p.y() - s.y;
  return dx * dx + dy * dy - s.weight;
}

}  // namespace porohom::rve
