#pragma once

#include <vector>

#include "seqpinn/field_eval.hpp"
#include "seqpinn/network.hpp"
#include "seqpinn/param_layout.hpp"
#include "seqpinn/physics.hpp"

namespace seqpinn {

struct LossGradient {
  LossBreakdown breakdown;
  Vec grad;  // d total / d flat, same layout as NetworkParams::flat
};

/// Derivative engine for the fixed MLP family. Values and input derivatives
/// are propagated as second-order jets (value, d/dx, d/dy, d2/dx2, d2/dy2)
/// stacked layerwise so each layer costs one GEMM; parameter gradients come
/// from a reverse sweep over the recorded jet computation.
///
/// Holds reusable workspace; one instance per training thread. All methods
/// are deterministic: identical inputs give bit-identical outputs.
class LossEvaluator {
 public:
  explicit LossEvaluator(const Architecture& arch);

  /// Exact field values and first/second input derivatives per point.
  FieldEval evaluate(const NetworkParams& params, const PointBatch& points);

  /// Composite loss breakdown and its exact parameter gradient.
  /// Throws DegenerateInputError for an empty batch.
  LossGradient loss_gradient(const NetworkParams& params, const ResidualBatch& batch,
                             const LossSpec& spec);

 private:
  void forward(const Vec& flat, const PointBatch& points);
  FieldEval output_field() const;
  Vec backward(const Vec& flat, const Mat& out_adjoint);

  Architecture arch_;
  ParamLayout layout_;

  // forward records (jet stacks are 5n x width; streams are row blocks in the
  // order value, d/dx, d/dy, d2/dx2, d2/dy2)
  Eigen::Index n_ = 0;
  Mat input_;                // 5n x input_dim
  Mat enc_z_[2];             // encoder pre-activation stacks
  Mat enc_a_[2];             // encoder jet outputs
  Mat enc_v_[2];             // encoder activation value blocks (n x width)
  std::vector<Mat> z_;       // per layer pre-activation stack
  std::vector<Mat> av_;      // per layer activation value block (n x width)
  std::vector<Mat> h_;       // h_[0] = input_, h_[k+1] = layer k output stack
  Mat out_;                  // 5n x output_dim
};

/// One-shot wrappers around LossEvaluator.
FieldEval evaluate_with_input_derivatives(const NetworkParams& params, const PointBatch& points);
LossGradient loss_gradient(const NetworkParams& params, const ResidualBatch& batch,
                           const LossSpec& spec);

}  // namespace seqpinn
