#pragma once

#include <Eigen/Core>

#include "seqpinn/network.hpp"

namespace seqpinn {

/// Weight matrices are stored row-major (fan_out rows, fan_in columns) so the
/// flat order is W[0][0], W[0][1], ..., b[0], b[1], ...
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using WeightView = Eigen::Map<const RowMat>;
using WeightViewMut = Eigen::Map<RowMat>;
using BiasView = Eigen::Map<const Vec>;
using BiasViewMut = Eigen::Map<Vec>;

/// Offsets of each affine block inside the flat parameter vector.
struct ParamLayout {
  struct Block {
    std::int64_t weight_offset = 0;
    std::int64_t bias_offset = 0;
    int fan_in = 0;
    int fan_out = 0;
  };

  explicit ParamLayout(const Architecture& arch);

  // encoder blocks are present only when attention is enabled
  bool has_encoders = false;
  Block encoder1;
  Block encoder2;
  std::vector<Block> hidden;
  Block output;
  std::int64_t total = 0;

  static WeightView weights(const Vec& flat, const Block& b) {
    return WeightView(flat.data() + b.weight_offset, b.fan_out, b.fan_in);
  }
  static BiasView biases(const Vec& flat, const Block& b) {
    return BiasView(flat.data() + b.bias_offset, b.fan_out);
  }
  static WeightViewMut weights_mut(Vec& flat, const Block& b) {
    return WeightViewMut(flat.data() + b.weight_offset, b.fan_out, b.fan_in);
  }
  static BiasViewMut biases_mut(Vec& flat, const Block& b) {
    return BiasViewMut(flat.data() + b.bias_offset, b.fan_out);
  }
};

}  // namespace seqpinn
