#include "porohom/solvers/fd_tangent.hpp"

#include "porohom/common/error.hpp"

namespace porohom::solvers {

Eigen::MatrixXd fd_constitutive_tangent(const std::function<Tensor2(const Tensor2&)>& stress, const Tensor2& F,
                                        double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("finite-difference step must be positive");
  const int d = F.dim();
  const int n = d * d;
  Eigen::MatrixXd A(n, n);
  for (int j = 0; j < n; ++j) {
    Tensor2 Fp = F;
    Tensor2 Fm = F;
    Fp(j / d, j % d) += epsilon;
    Fm(j / d, j % d) -= epsilon;
    A.col(j) = (stress(Fp).flat() - stress(Fm).flat()) / (2.0 * epsilon);
  }
  return A;
}

}  // namespace porohom::solvers
