#include "seqpinn/network.hpp"

#include <cmath>
#include <string>

#include "seqpinn/errors.hpp"
#include "seqpinn/param_layout.hpp"
#include "seqpinn/rng.hpp"

namespace seqpinn {

void Architecture::validate() const {
  if (input_dim < 1 || output_dim < 1)
    throw StructuralError("architecture: input/output dims must be >= 1");
  if (hidden_layers < 1) throw StructuralError("architecture: hidden_layers must be >= 1");
  if (hidden_width < 1) throw StructuralError("architecture: hidden_width must be >= 1");
}

std::vector<int> Architecture::layer_dims() const {
  std::vector<int> dims;
  dims.reserve(static_cast<std::size_t>(hidden_layers) + 2);
  dims.push_back(input_dim);
  for (int k = 0; k < hidden_layers; ++k) dims.push_back(hidden_width);
  dims.push_back(output_dim);
  return dims;
}

ParamLayout::ParamLayout(const Architecture& arch) {
  arch.validate();
  std::int64_t off = 0;
  auto add = [&off](int fan_in, int fan_out) {
    Block b;
    b.weight_offset = off;
    b.fan_in = fan_in;
    b.fan_out = fan_out;
    off += static_cast<std::int64_t>(fan_in) * fan_out;
    b.bias_offset = off;
    off += fan_out;
    return b;
  };

  has_encoders = arch.attention_enabled;
  if (has_encoders) {
    encoder1 = add(arch.input_dim, arch.hidden_width);
    encoder2 = add(arch.input_dim, arch.hidden_width);
  }
  int fan_in = arch.input_dim;
  hidden.reserve(static_cast<std::size_t>(arch.hidden_layers));
  for (int k = 0; k < arch.hidden_layers; ++k) {
    hidden.push_back(add(fan_in, arch.hidden_width));
    fan_in = arch.hidden_width;
  }
  output = add(fan_in, arch.output_dim);
  total = off;
}

std::int64_t param_count(const Architecture& arch) { return ParamLayout(arch).total; }

void NetworkParams::validate() const {
  arch.validate();
  const std::int64_t expected = param_count(arch);
  if (flat.size() != expected)
    throw StructuralError("params: flat length " + std::to_string(flat.size()) +
                          " does not match architecture (expected " + std::to_string(expected) +
                          ")");
}

NetworkParams init_network(const Architecture& arch, std::uint64_t seed) {
  const ParamLayout layout(arch);
  NetworkParams params;
  params.arch = arch;
  params.flat = Vec::Zero(layout.total);

  Rng rng(seed);
  auto fill_block = [&](const ParamLayout::Block& b) {
    const double limit = std::sqrt(6.0 / (b.fan_in + b.fan_out));
    auto w = ParamLayout::weights_mut(params.flat, b);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-limit, limit);
    // biases stay zero
  };

  if (layout.has_encoders) {
    fill_block(layout.encoder1);
    fill_block(layout.encoder2);
  }
  for (const auto& b : layout.hidden) fill_block(b);
  fill_block(layout.output);
  return params;
}

namespace {

inline void apply_activation(Mat& z, Activation act) {
  if (act == Activation::kTanh) z = z.array().tanh();
  // identity: leave as-is
}

}  // namespace

Mat forward(const NetworkParams& params, const PointBatch& points) {
  params.validate();
  const ParamLayout layout(params.arch);
  const Vec& flat = params.flat;

  Mat enc1, enc2;
  if (layout.has_encoders) {
    enc1.noalias() = points * ParamLayout::weights(flat, layout.encoder1).transpose();
    enc1.rowwise() += ParamLayout::biases(flat, layout.encoder1).transpose();
    apply_activation(enc1, params.arch.activation);
    enc2.noalias() = points * ParamLayout::weights(flat, layout.encoder2).transpose();
    enc2.rowwise() += ParamLayout::biases(flat, layout.encoder2).transpose();
    apply_activation(enc2, params.arch.activation);
  }

  Mat h = points;
  Mat z;
  for (const auto& b : layout.hidden) {
    z.noalias() = h * ParamLayout::weights(flat, b).transpose();
    z.rowwise() += ParamLayout::biases(flat, b).transpose();
    apply_activation(z, params.arch.activation);
    if (layout.has_encoders) {
      // h_k = (1 - z_k) .* E1 + z_k .* E2
      h = enc1.array() + z.array() * (enc2.array() - enc1.array());
    } else {
      h = z;
    }
  }

  Mat out;
  out.noalias() = h * ParamLayout::weights(flat, layout.output).transpose();
  out.rowwise() += ParamLayout::biases(flat, layout.output).transpose();
  return out;
}

NetworkParams average_params(const std::vector<NetworkParams>& params_list) {
  if (params_list.empty()) throw DegenerateInputError("average_params: empty list");
  const Architecture& arch = params_list.front().arch;
  for (const auto& p : params_list) {
    if (!(p.arch == arch)) throw StructuralError("average_params: mixed architectures");
    p.validate();
  }
  NetworkParams mean;
  mean.arch = arch;
  mean.flat = Vec::Zero(params_list.front().flat.size());
  for (const auto& p : params_list) mean.flat += p.flat;
  mean.flat /= static_cast<double>(params_list.size());
  return mean;
}

}  // namespace seqpinn
