#pragma once

#include <vector>

#include "seqpinn/field_eval.hpp"
#include "seqpinn/fluid.hpp"
#include "seqpinn/network.hpp"

namespace seqpinn {

enum class BoundaryKind { kWall, kInlet, kOutlet };

/// One boundary point with the values its kind imposes:
///   wall   -> u = v = 0 (no-slip)
///   inlet  -> u, v
///   outlet -> p
struct BoundarySample {
  double x = 0, y = 0;
  BoundaryKind kind = BoundaryKind::kWall;
  double u = 0, v = 0, p = 0;
};

/// Sparse velocity supervision sample with a per-component mask.
struct DataSample {
  double x = 0, y = 0;
  double u = 0, v = 0;
  bool supervise_u = true;
  bool supervise_v = true;
};

/// Everything one training step sees for a single frame.
struct ResidualBatch {
  PointBatch collocation;  // interior points, residual loss only
  std::vector<BoundarySample> boundary;
  std::vector<DataSample> data;

  Eigen::Index total_points() const {
    return collocation.rows() + static_cast<Eigen::Index>(boundary.size()) +
           static_cast<Eigen::Index>(data.size());
  }

  /// Stacked [collocation; boundary; data] locations, the row order every
  /// FieldEval over this batch must follow.
  PointBatch all_points() const;

  bool empty() const { return total_points() == 0; }

  /// Throws StructuralError on non-finite entries or wall samples with
  /// nonzero imposed velocity.
  void validate() const;
};

/// Loss weights and the Reynolds number of the non-dimensional equations.
struct LossSpec {
  double weight_residual = 1.0;  // PDE residual term
  double weight_boundary = 1.0;
  double weight_data = 1.0;
  double reynolds = 1.0;

  void validate() const;
};

/// Steady-state momentum and continuity residuals per point.
struct Residuals {
  Vec r_x, r_y, r_c;
};

/// r_x = u*du_dx + v*du_dy + dp_dx - (1/Re) * (d2u_dx2 + d2u_dy2)
/// r_y = u*dv_dx + v*dv_dy + dp_dy - (1/Re) * (d2v_dx2 + d2v_dy2)
/// r_c = du_dx + dv_dy
Residuals residuals(const FieldEval& eval, double reynolds);

struct LossBreakdown {
  double residual = 0;  // mean of r_x^2 + r_y^2 + r_c^2 over collocation
  double boundary = 0;  // MSE over imposed boundary components
  double data = 0;      // MSE over supervised data components
  double total = 0;     // weighted sum

  // term counts; 0 flags an empty category (term = 0 by convention)
  Eigen::Index collocation_points = 0;
  Eigen::Index boundary_terms = 0;
  Eigen::Index data_terms = 0;
};

/// Assemble the composite loss. `eval` must cover batch.all_points() in that
/// exact row order. Throws DegenerateInputError when the batch is empty.
LossBreakdown total_loss(const FieldEval& eval, const ResidualBatch& batch, const LossSpec& spec);

}  // namespace seqpinn
