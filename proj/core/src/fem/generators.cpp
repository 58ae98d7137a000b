#include "porohom/fem/generators.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/random.hpp"
#include "porohom/rve/regular_triangulation.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace porohom::fem {

namespace {

struct Hole {
  Eigen::Vector2d center;
  double radius;
};

MacroMesh from_lists(int dim, ElementType type, const std::vector<Eigen::VectorXd>& pts,
                     const std::vector<std::vector<int>>& elems) {
  MacroMesh m;
  m.dim = dim;
  m.type = type;
  m.nodes.resize(static_cast<Eigen::Index>(pts.size()), dim);
  for (std::size_t i = 0; i < pts.size(); ++i) m.nodes.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  const auto npe = elems.empty() ? 0 : static_cast<Eigen::Index>(elems.front().size());
  m.elements.resize(static_cast<Eigen::Index>(elems.size()), npe);
  for (std::size_t e = 0; e < elems.size(); ++e)
    for (Eigen::Index a = 0; a < npe; ++a) m.elements(static_cast<Eigen::Index>(e), a) = elems[e][static_cast<std::size_t>(a)];
  return m;
}

double simplex_volume(const MacroMesh& m, const std::vector<int>& v) {
  const int d = m.dim;
  Eigen::MatrixXd J(d, d);
  for (int k = 0; k < d; ++k) J.col(k) = (m.nodes.row(v[static_cast<std::size_t>(k + 1)]) - m.nodes.row(v[0])).transpose();
  return J.determinant();
}

// Keeps simplices positively oriented by swapping the last two vertices.
void orient_simplices(MacroMesh& m) {
  for (Eigen::Index e = 0; e < m.elements.rows(); ++e) {
    std::vector<int> v(m.elements.row(e).data(), m.elements.row(e).data() + m.dim + 1);
    if (simplex_volume(m, v) < 0.0) std::swap(m.elements(e, m.dim - 1), m.elements(e, m.dim));
  }
}

// Triangulated polygonal domain: outer square or circle minus circular holes.
struct PlanarDomain {
  enum class Outer { square, disk } outer = Outer::square;
  Eigen::Vector2d origin{0.0, 0.0};  // square corner or disk centre
  double size = 1.0;                 // square edge or disk radius
  std::vector<Hole> holes;

  bool inside(const Eigen::Vector2d& p) const {
    if (outer == Outer::square) {
      if (p.x() < origin.x() || p.x() > origin.x() + size || p.y() < origin.y() || p.y() > origin.y() + size) return false;
    } else if ((p - origin).norm() > size) {
      return false;
    }
    for (const auto& h : holes) {
      if ((p - h.center).norm() < h.radius) return false;
    }
    return true;
  }

  double clearance(const Eigen::Vector2d& p) const {
    double c = outer == Outer::square
                   ? std::min({p.x() - origin.x(), origin.x() + size - p.x(), p.y() - origin.y(), origin.y() + size - p.y()})
                   : size - (p - origin).norm();
    for (const auto& h : holes) c = std::min(c, (p - h.center).norm() - h.radius);
    return c;
  }
};

// Delaunay mesh of a planar domain from boundary samples and a jittered grid.
// Ghost points outside the outer boundary keep its facets inside the triangulation.
MacroMesh planar_delaunay(const PlanarDomain& dom, double h, int segments, unsigned long long seed) {
  std::vector<Eigen::Vector2d> interior, boundary, ghosts, centers;
  Rng rng(seed);

  if (dom.outer == PlanarDomain::Outer::square) {
    const int n = std::max(1, static_cast<int>(std::ceil(dom.size / h - 1e-9)));
    const double hb = dom.size / n;
    for (int side = 0; side < 4; ++side) {
      for (int i = 0; i < n; ++i) {
        const double t = i * hb;
        Eigen::Vector2d p;
        Eigen::Vector2d g;
        const double off = 0.6 * hb;
        switch (side) {
          case 0: p = {t, 0.0}; g = {t + 0.5 * hb, -off}; break;
          case 1: p = {dom.size, t}; g = {dom.size + off, t + 0.5 * hb}; break;
          case 2: p = {dom.size - t, dom.size}; g = {dom.size - t - 0.5 * hb, dom.size + off}; break;
          default: p = {0.0, dom.size - t}; g = {-off, dom.size - t - 0.5 * hb}; break;
        }
        boundary.push_back(dom.origin + p);
        ghosts.push_back(dom.origin + g);
      }
    }
    const double off = 0.6 * hb;
    for (const Eigen::Vector2d& c : {Eigen::Vector2d(-off, -off), Eigen::Vector2d(dom.size + off, -off),
                                    Eigen::Vector2d(dom.size + off, dom.size + off), Eigen::Vector2d(-off, dom.size + off)}) {
      ghosts.push_back(dom.origin + c);
    }
  } else {
    const double hb = 2.0 * std::numbers::pi * dom.size / segments;
    for (int i = 0; i < segments; ++i) {
      const double a = 2.0 * std::numbers::pi * i / segments;
      const double ag = 2.0 * std::numbers::pi * (i + 0.5) / segments;
      boundary.push_back(dom.origin + dom.size * Eigen::Vector2d(std::cos(a), std::sin(a)));
      ghosts.push_back(dom.origin + (dom.size + 0.6 * hb) * Eigen::Vector2d(std::cos(ag), std::sin(ag)));
    }
  }
  for (const auto& hole : dom.holes) {
    for (int i = 0; i < segments; ++i) {
      const double a = 2.0 * std::numbers::pi * i / segments;
      boundary.push_back(hole.center + hole.radius * Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
    centers.push_back(hole.center);
  }

  // Jittered interior grid, kept clear of every boundary.
  const double lo_x = dom.outer == PlanarDomain::Outer::square ? dom.origin.x() : dom.origin.x() - dom.size;
  const double lo_y = dom.outer == PlanarDomain::Outer::square ? dom.origin.y() : dom.origin.y() - dom.size;
  const double extent = dom.outer == PlanarDomain::Outer::square ? dom.size : 2.0 * dom.size;
  const int n = static_cast<int>(std::ceil(extent / h));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double jx = rng.uniform(-0.15, 0.15), jy = rng.uniform(-0.15, 0.15);
      const Eigen::Vector2d p(lo_x + (i + 0.5 + jx) * h, lo_y + (j + 0.5 + jy) * h);
      if (dom.inside(p) && dom.clearance(p) >= 0.7 * h) interior.push_back(p);
    }
  }

  std::vector<rve::WeightedSite> sites;
  for (const auto* group : {&interior, &boundary, &ghosts, &centers}) {
    for (const auto& p : *group) sites.push_back({p.x(), p.y(), 0.0});
  }
  const std::size_t n_real = interior.size() + boundary.size();
  const rve::RegularTriangulation tri(sites);

  std::vector<int> remap(sites.size(), -1);
  std::vector<Eigen::VectorXd> pts;
  std::vector<std::vector<int>> elems;
  for (const auto& t : tri.triangles()) {
    if (static_cast<std::size_t>(std::max({t[0], t[1], t[2]})) >= n_real) continue;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (int v : t) c += Eigen::Vector2d(sites[static_cast<std::size_t>(v)].x, sites[static_cast<std::size_t>(v)].y) / 3.0;
    if (!dom.inside(c)) continue;
    std::vector<int> e;
    for (int v : t) {
      if (remap[static_cast<std::size_t>(v)] < 0) {
        remap[static_cast<std::size_t>(v)] = static_cast<int>(pts.size());
        pts.push_back(Eigen::Vector2d(sites[static_cast<std::size_t>(v)].x, sites[static_cast<std::size_t>(v)].y));
      }
      e.push_back(remap[static_cast<std::size_t>(v)]);
    }
    elems.push_back(e);
  }
  MacroMesh m = from_lists(2, ElementType::P1, pts, elems);
  orient_simplices(m);
  return m;
}

// Extrudes a 2D triangle mesh in the (y, z) plane along x; prisms split into three tets.
MacroMesh extrude_x(const MacroMesh& base, double length, int layers) {
  const auto nb = static_cast<int>(base.node_count());
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k <= layers; ++k) {
    for (int i = 0; i < nb; ++i) {
      Eigen::VectorXd p(3);
      p << length * k / layers, base.nodes(i, 0), base.nodes(i, 1);
      pts.push_back(p);
    }
  }
  std::vector<std::vector<int>> elems;
  for (int k = 0; k < layers; ++k) {
    for (Eigen::Index e = 0; e < base.elements.rows(); ++e) {
      std::array<int, 3> v{base.elements(e, 0), base.elements(e, 1), base.elements(e, 2)};
      std::sort(v.begin(), v.end());
      const int b = k * nb, t = (k + 1) * nb;
      // The diagonal of every side face joins the top of its lower-index vertex to the
      // bottom of the higher-index one, so neighbouring prisms agree.
      elems.push_back({b + v[0], b + v[1], b + v[2], t + v[0]});
      elems.push_back({b + v[1], b + v[2], t + v[0], t + v[1]});
      elems.push_back({b + v[2], t + v[0], t + v[1], t + v[2]});
    }
  }
  MacroMesh m = from_lists(3, ElementType::P1, pts, elems);
  orient_simplices(m);
  return m;
}

MacroMesh finish(MacroMesh p1, ElementType type) {
  if (type == ElementType::P2) return elevate_to_p2(p1);
  if (type == ElementType::Q1) throw UnsupportedMesh("Q1 elements are only available on structured square/cube meshes");
  return p1;
}

}  // namespace

MacroMesh rectangle_mesh(int nx, int ny, ElementType type, double lx, double ly) {
  if (nx < 1 || ny < 1) throw ValidationError("rectangle_mesh: cell counts must be positive");
  std::vector<Eigen::VectorXd> pts;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) pts.push_back(Eigen::Vector2d(lx * i / nx, ly * j / ny));
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<int>> elems;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if (type == ElementType::Q1) {
        elems.push_back({a, b, c, d});
      } else {
        elems.push_back({a, b, c});
        elems.push_back({a, c, d});
      }
    }
  }
  MacroMesh m = from_lists(2, type == ElementType::Q1 ? ElementType::Q1 : ElementType::P1, pts, elems);
  if (type == ElementType::P2) m = elevate_to_p2(m);
  MeshOrigin o;
  o.shape = "rectangle";
  o.cells = {nx, ny, 0};
  o.lengths = {lx, ly, 0.0};
  m.origin = o;
  return m;
}

MacroMesh box_mesh(int nx, int ny, int nz, ElementType type, double lx, double ly, double lz) {
  if (nx < 1 || ny < 1 || nz < 1) throw ValidationError("box_mesh: cell counts must be positive");
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) pts.push_back(Eigen::Vector3d(lx * i / nx, ly * j / ny, lz * k / nz));
  auto id = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  std::vector<std::vector<int>> elems;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        auto v = [&](int di, int dj, int dk) { return id(i + di, j + dj, k + dk); };
        if (type == ElementType::Q1) {
          elems.push_back({v(0, 0, 0), v(1, 0, 0), v(1, 1, 0), v(0, 1, 0), v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)});
          continue;
        }
        // Kuhn split: one tet per monotone path from (0,0,0) to (1,1,1).
        int perm[3] = {0, 1, 2};
        do {
          int p[3] = {0, 0, 0};
          std::vector<int> tet{v(0, 0, 0)};
          for (int s = 0; s < 3; ++s) {
            p[perm[s]] = 1;
            tet.push_back(v(p[0], p[1], p[2]));
          }
          elems.push_back(tet);
        } while (std::next_permutation(perm, perm + 3));
      }
    }
  }
  MacroMesh m = from_lists(3, type == ElementType::Q1 ? ElementType::Q1 : ElementType::P1, pts, elems);
  if (type != ElementType::Q1) orient_simplices(m);
  if (type == ElementType::P2) m = elevate_to_p2(m);
  MeshOrigin o;
  o.shape = "box";
  o.cells = {nx, ny, nz};
  o.lengths = {lx, ly, lz};
  m.origin = o;
  return m;
}

MacroMesh elevate_to_p2(const MacroMesh& p1) {
  if (p1.type != ElementType::P1) throw UnsupportedMesh("P2 elevation needs a P1 mesh");
  const int d = p1.dim;
  static constexpr int kTri[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  static constexpr int kTet[6][2] = {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}};
  const int n_edges = d == 2 ? 3 : 6;
  std::vector<Eigen::VectorXd> pts;
  for (Eigen::Index i = 0; i < p1.nodes.rows(); ++i) pts.push_back(p1.nodes.row(i).transpose());
  std::map<std::pair<int, int>, int> mid;
  std::vector<std::vector<int>> elems;
  for (Eigen::Index e = 0; e < p1.elements.rows(); ++e) {
    std::vector<int> el(p1.elements.row(e).data(), p1.elements.row(e).data() + d + 1);
    for (int k = 0; k < n_edges; ++k) {
      const int a = el[static_cast<std::size_t>(d == 2 ? kTri[k][0] : kTet[k][0])];
      const int b = el[static_cast<std::size_t>(d == 2 ? kTri[k][1] : kTet[k][1])];
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it == mid.end()) {
        it = mid.emplace(key, static_cast<int>(pts.size())).first;
        pts.push_back(0.5 * (p1.nodes.row(a) + p1.nodes.row(b)).transpose());
      }
      el.push_back(it->second);
    }
    elems.push_back(el);
  }
  MacroMesh m = from_lists(d, ElementType::P2, pts, elems);
  m.origin = p1.origin;
  return m;
}

std::vector<std::string> shape_names() { return {"square", "cube", "plate1", "plate5", "cubehole", "cylinder"}; }

MacroMesh generate_mesh(const std::string& shape, ElementType type, int level, const GeneratorOptions& options) {
  if (level < 0) throw ValidationError("refinement level must be >= 0");
  const int scale = 1 << level;
  MacroMesh m;
  if (shape == "square") {
    const int n = (type == ElementType::P2 ? 2 : 4) * scale;
    m = rectangle_mesh(n, n, type);
  } else if (shape == "cube") {
    const int n = (type == ElementType::P2 ? 1 : 2) * scale;
    m = box_mesh(n, n, n, type);
  } else if (shape == "plate1" || shape == "plate5") {
    PlanarDomain dom;
    dom.holes.push_back({{0.5, 0.5}, 0.2});
    if (shape == "plate5") {
      for (double dx : {-0.3, 0.3})
        for (double dy : {-0.3, 0.3}) dom.holes.push_back({{0.5 + dx, 0.5 + dy}, 0.1});
    }
    m = finish(planar_delaunay(dom, 1.0 / (16.0 * scale), options.segments, options.seed), type);
  } else if (shape == "cubehole") {
    PlanarDomain dom;
    dom.holes.push_back({{0.5, 0.5}, 0.25});
    const double h = 1.0 / (6.0 * scale);
    m = finish(extrude_x(planar_delaunay(dom, h, options.segments, options.seed), 1.0, 6 * scale), type);
  } else if (shape == "cylinder") {
    PlanarDomain dom;
    dom.outer = PlanarDomain::Outer::disk;
    dom.size = 0.5;
    const double h = 1.0 / (6.0 * scale);
    m = finish(extrude_x(planar_delaunay(dom, h, options.segments, options.seed), 2.0, 12 * scale), type);
  } else {
    throw ValidationError("unknown shape '" + shape + "'");
  }
  MeshOrigin o;
  o.shape = shape;
  o.level = level;
  o.segments = options.segments;
  o.seed = options.seed;
  m.origin = o;
  return m;
}

MacroMesh refine(const MacroMesh& mesh) {
  if (!mesh.origin) throw UnsupportedMesh("only meshes from the built-in generators can be refined");
  const MeshOrigin& o = *mesh.origin;
  MacroMesh out;
  if (o.shape == "rectangle") {
    out = rectangle_mesh(2 * o.cells[0], 2 * o.cells[1], mesh.type, o.lengths[0], o.lengths[1]);
  } else if (o.shape == "box") {
    out = box_mesh(2 * o.cells[0], 2 * o.cells[1], 2 * o.cells[2], mesh.type, o.lengths[0], o.lengths[1], o.lengths[2]);
  } else {
    out = generate_mesh(o.shape, mesh.type, o.level + 1, GeneratorOptions{o.segments, o.seed});
  }
  return out;
}

}  // namespace porohom::fem
