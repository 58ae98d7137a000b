#pragma once

#include "porohom/common/tensor.hpp"

namespace porohom::micro {

/// det(I + p q^T) = 1 + <p, q>.
double rank_one_det(const SmallVector& p, const SmallVector& q);

/// Inverse of F = I + p q^T as ((1 + det F) I - F) / det F.
/// Throws SingularMatrix when |det F| <= 1e-12.
Tensor2 rank_one_inverse(const Tensor2& F);

}  // namespace porohom::micro
