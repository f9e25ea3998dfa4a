#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace seqpinn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// Batch of 2D sample locations, one (x, y) row per point.
using PointBatch = Eigen::Matrix<double, Eigen::Dynamic, 2>;

enum class Activation { kTanh, kIdentity };

/// Shape of the field network: an MLP from (x, y) to (u, v, p), optionally
/// with two input-encoder streams gating every hidden layer.
struct Architecture {
  int input_dim = 2;
  int output_dim = 3;
  int hidden_layers = 8;
  int hidden_width = 150;
  bool attention_enabled = true;
  Activation activation = Activation::kTanh;

  /// Throws StructuralError on non-positive sizes.
  void validate() const;

  /// [input_dim, width x hidden_layers, output_dim].
  std::vector<int> layer_dims() const;

  bool operator==(const Architecture&) const = default;
};

/// Total number of scalar parameters implied by the architecture.
std::int64_t param_count(const Architecture& arch);

/// Architecture descriptor plus one flat parameter vector.
///
/// Flat layout, in order:
///   [encoder1 W (width x input, row-major), encoder1 b,
///    encoder2 W, encoder2 b]            -- only when attention_enabled
///   for each hidden layer k:  W_k (width x fan_in, row-major), b_k
///   output layer:             W_out (output x width, row-major), b_out
struct NetworkParams {
  Architecture arch;
  Vec flat;

  /// Throws StructuralError if flat length disagrees with arch.
  void validate() const;
};

/// Glorot-uniform weights, zero biases; bit-deterministic per seed.
NetworkParams init_network(const Architecture& arch, std::uint64_t seed);

/// Field values at each point; returns an n x 3 matrix of (u, v, p) rows.
Mat forward(const NetworkParams& params, const PointBatch& points);

/// Element-wise arithmetic mean of the flat vectors.
/// All entries must share one architecture; the list must be non-empty.
NetworkParams average_params(const std::vector<NetworkParams>& params_list);

}  // namespace seqpinn
