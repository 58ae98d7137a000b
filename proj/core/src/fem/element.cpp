#include "porohom/fem/element.hpp"

#include "porohom/common/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace porohom::fem {

std::string to_string(ElementType type) {
  switch (type) {
    case ElementType::Q1: return "Q1";
    case ElementType::P1: return "P1";
    case ElementType::P2: return "P2";
  }
  return "?";
}

ElementType element_type_from_string(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (u == "Q1") return ElementType::Q1;
  if (u == "P1") return ElementType::P1;
  if (u == "P2") return ElementType::P2;
  throw ParseError("unknown element type '" + s + "' (expected Q1, P1 or P2)");
}

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

// Corner signs of the reference quad / hex in VTK order.
constexpr double kQuad[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
constexpr double kHex[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                               {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};
constexpr int kTet10Edges[6][2] = {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}};
constexpr int kTri6Edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};

}  // namespace

ReferenceElement::ReferenceElement(ElementType type, int dim) : type_(type), dim_(dim) {
  if (dim != 2 && dim != 3) throw ShapeMismatch("element dimension must be 2 or 3");
  switch (type) {
    case ElementType::Q1: {
      nodes_ = dim == 2 ? 4 : 8;
      const double g = 1.0 / std::sqrt(3.0);
      if (dim == 2) {
        for (int j = 0; j < 2; ++j)
          for (int i = 0; i < 2; ++i) {
            points_.push_back(vec({i ? g : -g, j ? g : -g}));
            weights_.push_back(1.0);
          }
      } else {
        for (int k = 0; k < 2; ++k)
          for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) {
              points_.push_back(vec({i ? g : -g, j ? g : -g, k ? g : -g}));
              weights_.push_back(1.0);
            }
      }
      break;
    }
    case ElementType::P1:
      nodes_ = dim + 1;
      if (dim == 2) {
        points_.push_back(vec({1.0 / 3.0, 1.0 / 3.0}));
        weights_.push_back(0.5);
      } else {
        points_.push_back(vec({0.25, 0.25, 0.25}));
        weights_.push_back(1.0 / 6.0);
      }
      break;
    case ElementType::P2:
      nodes_ = dim == 2 ? 6 : 10;
      if (dim == 2) {
        const double a = 1.0 / 6.0, b = 2.0 / 3.0;
        points_ = {vec({a, a}), vec({b, a}), vec({a, b})};
        weights_ = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      } else {
        const double a = 0.5854101966249685, b = 0.1381966011250105;
        points_ = {vec({b, b, b}), vec({a, b, b}), vec({b, a, b}), vec({b, b, a})};
        weights_.assign(4, 1.0 / 24.0);
      }
      break;
  }
}

int ReferenceElement::vtk_cell_type() const {
  switch (type_) {
    case ElementType::Q1: return dim_ == 2 ? 9 : 12;
    case ElementType::P1: return dim_ == 2 ? 5 : 10;
    case ElementType::P2: return dim_ == 2 ? 22 : 24;
  }
  return 0;
}

Eigen::VectorXd ReferenceElement::shape(const Eigen::VectorXd& xi) const {
  Eigen::VectorXd N(nodes_);
  if (type_ == ElementType::Q1) {
    for (int a = 0; a < nodes_; ++a) {
      double v = 1.0;
      for (int d = 0; d < dim_; ++d) v *= 0.5 * (1.0 + (dim_ == 2 ? kQuad[a][d] : kHex[a][d]) * xi[d]);
      N[a] = v;
    }
    return N;
  }
  // Barycentric coordinates.
  Eigen::VectorXd l(dim_ + 1);
  l[0] = 1.0 - xi.sum();
  l.tail(dim_) = xi;
  if (type_ == ElementType::P1) return l;
  for (int a = 0; a <= dim_; ++a) N[a] = l[a] * (2.0 * l[a] - 1.0);
  if (dim_ == 2) {
    for (int e = 0; e < 3; ++e) N[3 + e] = 4.0 * l[kTri6Edges[e][0]] * l[kTri6Edges[e][1]];
  } else {
    for (int e = 0; e < 6; ++e) N[4 + e] = 4.0 * l[kTet10Edges[e][0]] * l[kTet10Edges[e][1]];
  }
  return N;
}

Eigen::MatrixXd ReferenceElement::shape_gradient(const Eigen::VectorXd& xi) const {
  Eigen::MatrixXd G(nodes_, dim_);
  if (type_ == ElementType::Q1) {
    for (int a = 0; a < nodes_; ++a) {
      for (int d = 0; d < dim_; ++d) {
        double v = 1.0;
        for (int k = 0; k < dim_; ++k) {
          const double s = dim_ == 2 ? kQuad[a][k] : kHex[a][k];
          v *= k == d ? 0.5 * s : 0.5 * (1.0 + s * xi[k]);
        }
        G(a, d) = v;
      }
    }
    return G;
  }
  Eigen::VectorXd l(dim_ + 1);
  l[0] = 1.0 - xi.sum();
  l.tail(dim_) = xi;
  // dl/dxi: row a is the gradient of barycentric coordinate a.
  Eigen::MatrixXd dl = Eigen::MatrixXd::Zero(dim_ + 1, dim_);
  dl.row(0).setConstant(-1.0);
  dl.bottomRows(dim_).setIdentity();
  if (type_ == ElementType::P1) return dl;
  for (int a = 0; a <= dim_; ++a) G.row(a) = (4.0 * l[a] - 1.0) * dl.row(a);
  const int n_edges = dim_ == 2 ? 3 : 6;
  for (int e = 0; e < n_edges; ++e) {
    const int i = dim_ == 2 ? kTri6Edges[e][0] : kTet10Edges[e][0];
    const int j = dim_ == 2 ? kTri6Edges[e][1] : kTet10Edges[e][1];
    G.row(dim_ + 1 + e) = 4.0 * (l[i] * dl.row(j) + l[j] * dl.row(i));
  }
  return G;
}

}  // namespace porohom::fem
