#include "porohom/micro/rank_one.hpp"

#include "porohom/common/error.hpp"

#include <cmath>

namespace porohom::micro {

double rank_one_det(const SmallVector& p, const SmallVector& q) {
  if (p.size() != q.size() || (p.size() != 2 && p.size() != 3)) {
    throw ShapeMismatch("rank_one_det: vectors must both have 2 or 3 components");
  }
  return 1.0 + p.dot(q);
}

Tensor2 rank_one_inverse(const Tensor2& F) {
  const int d = F.dim();
  // For F = I + p q^T the trace gives det F = 1 + <p, q> without knowing p, q.
  const double det = F.matrix().trace() - (d - 1);
  if (!(std::abs(det) > 1e-12)) throw SingularMatrix("rank-one update is singular (det = " + std::to_string(det) + ")");
  SmallMatrix G = (1.0 + det) * SmallMatrix::Identity(d, d) - F.matrix();
  return Tensor2(SmallMatrix(G / det));
}

}  // namespace porohom::micro
