#pragma once

#include "porohom/common/tensor.hpp"

#include <Eigen/Core>

#include <functional>

namespace porohom::solvers {

/// Central-difference dP/dF. Column j perturbs the j-th row-major component of F;
/// rows follow the row-major flattening of P. Costs 2 d^2 evaluations.
Eigen::MatrixXd fd_constitutive_tangent(const std::function<Tensor2(const Tensor2&)>& stress, const Tensor2& F,
                                        double epsilon = 1e-6);

}  // namespace porohom::solvers
