#pragma once

#include <Eigen/Core>

#include "seqpinn/network.hpp"

namespace seqpinn {

/// Field values and input derivatives for a batch of points. One entry per
/// point; all derivatives are exact (propagated, not finite-differenced).
struct FieldEval {
  Vec u, v, p;
  Vec du_dx, du_dy, dv_dx, dv_dy, dp_dx, dp_dy;
  Vec d2u_dx2, d2u_dy2, d2v_dx2, d2v_dy2;

  Eigen::Index size() const { return u.size(); }

  /// All entries finite (invariant check; throws StructuralError).
  void validate() const;
};

}  // namespace seqpinn
