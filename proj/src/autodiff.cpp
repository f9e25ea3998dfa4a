#include "seqpinn/autodiff.hpp"

#include "seqpinn/errors.hpp"

namespace seqpinn {

namespace {

using Arr = Eigen::ArrayXXd;

// stream indices inside a jet stack
constexpr int kVal = 0, kDx = 1, kDy = 2, kDxx = 3, kDyy = 4;
constexpr int kStreams = 5;

inline Eigen::Block<Mat> stream(Mat& stack, Eigen::Index n, int s) {
  return stack.middleRows(s * n, n);
}
inline Eigen::Block<const Mat> stream(const Mat& stack, Eigen::Index n, int s) {
  return stack.middleRows(s * n, n);
}
inline auto sa(Mat& stack, Eigen::Index n, int s) { return stack.middleRows(s * n, n).array(); }
inline auto sa(const Mat& stack, Eigen::Index n, int s) {
  return stack.middleRows(s * n, n).array();
}

/// A = activation(Z) propagated through the jets. `value` receives the plain
/// activation values (n x w) used later by the reverse sweep.
void activate_jets(const Mat& z, Eigen::Index n, Activation act, Mat& a, Mat& value) {
  if (act == Activation::kIdentity) {
    a = z;
    value = stream(z, n, kVal);
    return;
  }
  a.resizeLike(z);
  value = stream(z, n, kVal).array().tanh().matrix();
  const auto av = value.array();
  const Arr t1 = 1.0 - av.square();  // tanh'
  const Arr t2 = -2.0 * av * t1;     // tanh''
  stream(a, n, kVal) = value;
  sa(a, n, kDx) = t1 * sa(z, n, kDx);
  sa(a, n, kDy) = t1 * sa(z, n, kDy);
  sa(a, n, kDxx) = t2 * sa(z, n, kDx).square() + t1 * sa(z, n, kDxx);
  sa(a, n, kDyy) = t2 * sa(z, n, kDy).square() + t1 * sa(z, n, kDyy);
}

/// Adjoint of activate_jets: given d(loss)/dA, accumulate d(loss)/dZ.
void activate_jets_reverse(const Mat& z, const Mat& value, Eigen::Index n, Activation act,
                           const Mat& a_bar, Mat& z_bar) {
  if (act == Activation::kIdentity) {
    z_bar = a_bar;
    return;
  }
  const auto av = value.array();
  const Arr t1 = 1.0 - av.square();
  const Arr t2 = -2.0 * av * t1;
  const Arr t3 = (6.0 * av.square() - 2.0) * t1;  // tanh'''
  const auto zdx = sa(z, n, kDx);
  const auto zdy = sa(z, n, kDy);
  z_bar.resizeLike(a_bar);
  sa(z_bar, n, kVal) = sa(a_bar, n, kVal) * t1 + sa(a_bar, n, kDx) * t2 * zdx +
                       sa(a_bar, n, kDy) * t2 * zdy +
                       sa(a_bar, n, kDxx) * (t3 * zdx.square() + t2 * sa(z, n, kDxx)) +
                       sa(a_bar, n, kDyy) * (t3 * zdy.square() + t2 * sa(z, n, kDyy));
  sa(z_bar, n, kDx) = sa(a_bar, n, kDx) * t1 + 2.0 * sa(a_bar, n, kDxx) * t2 * zdx;
  sa(z_bar, n, kDy) = sa(a_bar, n, kDy) * t1 + 2.0 * sa(a_bar, n, kDyy) * t2 * zdy;
  sa(z_bar, n, kDxx) = sa(a_bar, n, kDxx) * t1;
  sa(z_bar, n, kDyy) = sa(a_bar, n, kDyy) * t1;
}

}  // namespace

LossEvaluator::LossEvaluator(const Architecture& arch) : arch_(arch), layout_(arch) {
  arch.validate();
  z_.resize(static_cast<std::size_t>(arch.hidden_layers));
  av_.resize(static_cast<std::size_t>(arch.hidden_layers));
  h_.resize(static_cast<std::size_t>(arch.hidden_layers) + 1);
}

void LossEvaluator::forward(const Vec& flat, const PointBatch& points) {
  const Eigen::Index n = points.rows();
  n_ = n;

  input_.setZero(kStreams * n, arch_.input_dim);
  stream(input_, n, kVal) = points;
  stream(input_, n, kDx).col(0).setOnes();
  stream(input_, n, kDy).col(1).setOnes();

  auto affine = [&](const Mat& in, const ParamLayout::Block& blk, Mat& out) {
    out.noalias() = in * ParamLayout::weights(flat, blk).transpose();
    stream(out, n, kVal).rowwise() += ParamLayout::biases(flat, blk).transpose();
  };

  if (layout_.has_encoders) {
    affine(input_, layout_.encoder1, enc_z_[0]);
    activate_jets(enc_z_[0], n, arch_.activation, enc_a_[0], enc_v_[0]);
    affine(input_, layout_.encoder2, enc_z_[1]);
    activate_jets(enc_z_[1], n, arch_.activation, enc_a_[1], enc_v_[1]);
  }

  h_[0] = input_;
  Mat a;
  for (std::size_t k = 0; k < layout_.hidden.size(); ++k) {
    affine(h_[k], layout_.hidden[k], z_[k]);
    activate_jets(z_[k], n, arch_.activation, a, av_[k]);
    if (layout_.has_encoders) {
      // h = (1 - a) .* E1 + a .* E2, per stream via the product rule
      Mat& h = h_[k + 1];
      h.resizeLike(a);
      const Mat& e1 = enc_a_[0];
      const Mat& e2 = enc_a_[1];
      const Arr g = sa(e2, n, kVal) - sa(e1, n, kVal);
      const auto aval = sa(a, n, kVal);
      sa(h, n, kVal) = sa(e1, n, kVal) + aval * g;
      sa(h, n, kDx) = sa(a, n, kDx) * g + sa(e1, n, kDx) + aval * (sa(e2, n, kDx) - sa(e1, n, kDx));
      sa(h, n, kDy) = sa(a, n, kDy) * g + sa(e1, n, kDy) + aval * (sa(e2, n, kDy) - sa(e1, n, kDy));
      sa(h, n, kDxx) = sa(a, n, kDxx) * g + 2.0 * sa(a, n, kDx) * (sa(e2, n, kDx) - sa(e1, n, kDx)) +
                       sa(e1, n, kDxx) + aval * (sa(e2, n, kDxx) - sa(e1, n, kDxx));
      sa(h, n, kDyy) = sa(a, n, kDyy) * g + 2.0 * sa(a, n, kDy) * (sa(e2, n, kDy) - sa(e1, n, kDy)) +
                       sa(e1, n, kDyy) + aval * (sa(e2, n, kDyy) - sa(e1, n, kDyy));
    } else {
      h_[k + 1] = a;
    }
  }
  affine(h_.back(), layout_.output, out_);
}

FieldEval LossEvaluator::output_field() const {
  const Eigen::Index n = n_;
  FieldEval f;
  f.u = stream(out_, n, kVal).col(0);
  f.v = stream(out_, n, kVal).col(1);
  f.p = stream(out_, n, kVal).col(2);
  f.du_dx = stream(out_, n, kDx).col(0);
  f.du_dy = stream(out_, n, kDy).col(0);
  f.dv_dx = stream(out_, n, kDx).col(1);
  f.dv_dy = stream(out_, n, kDy).col(1);
  f.dp_dx = stream(out_, n, kDx).col(2);
  f.dp_dy = stream(out_, n, kDy).col(2);
  f.d2u_dx2 = stream(out_, n, kDxx).col(0);
  f.d2u_dy2 = stream(out_, n, kDyy).col(0);
  f.d2v_dx2 = stream(out_, n, kDxx).col(1);
  f.d2v_dy2 = stream(out_, n, kDyy).col(1);
  return f;
}

FieldEval LossEvaluator::evaluate(const NetworkParams& params, const PointBatch& points) {
  params.validate();
  if (!(params.arch == arch_)) throw StructuralError("evaluator: architecture mismatch");
  forward(params.flat, points);
  return output_field();
}

Vec LossEvaluator::backward(const Vec& flat, const Mat& out_adjoint) {
  const Eigen::Index n = n_;
  Vec grad = Vec::Zero(layout_.total);

  auto affine_reverse = [&](const Mat& z_bar, const Mat& in, const ParamLayout::Block& blk,
                            Mat* in_bar) {
    ParamLayout::weights_mut(grad, blk).noalias() += z_bar.transpose() * in;
    ParamLayout::biases_mut(grad, blk).noalias() +=
        stream(z_bar, n, kVal).colwise().sum().transpose();
    if (in_bar) in_bar->noalias() = z_bar * ParamLayout::weights(flat, blk);
  };

  // through the (linear) output layer
  Mat h_bar;
  affine_reverse(out_adjoint, h_.back(), layout_.output, &h_bar);

  Mat enc_bar[2];
  if (layout_.has_encoders) {
    enc_bar[0].setZero(kStreams * n, arch_.hidden_width);
    enc_bar[1].setZero(kStreams * n, arch_.hidden_width);
  }

  Mat a_bar, z_bar;
  for (int k = arch_.hidden_layers - 1; k >= 0; --k) {
    const std::size_t ki = static_cast<std::size_t>(k);
    const Mat& z = z_[ki];
    const Mat& av = av_[ki];

    if (layout_.has_encoders) {
      // recompute the activation jet streams from the recorded pre-activations
      Arr t1, t2;
      if (arch_.activation == Activation::kTanh) {
        t1 = 1.0 - av.array().square();
        t2 = -2.0 * av.array() * t1;
      } else {
        t1 = Arr::Ones(n, arch_.hidden_width);
        t2 = Arr::Zero(n, arch_.hidden_width);
      }
      const Arr a_dx = t1 * sa(z, n, kDx);
      const Arr a_dy = t1 * sa(z, n, kDy);
      const Arr a_dxx = t2 * sa(z, n, kDx).square() + t1 * sa(z, n, kDxx);
      const Arr a_dyy = t2 * sa(z, n, kDy).square() + t1 * sa(z, n, kDyy);

      const Mat& e1 = enc_a_[0];
      const Mat& e2 = enc_a_[1];
      const Arr g = sa(e2, n, kVal) - sa(e1, n, kVal);
      const Arr gdx = sa(e2, n, kDx) - sa(e1, n, kDx);
      const Arr gdy = sa(e2, n, kDy) - sa(e1, n, kDy);
      const Arr gdxx = sa(e2, n, kDxx) - sa(e1, n, kDxx);
      const Arr gdyy = sa(e2, n, kDyy) - sa(e1, n, kDyy);
      const auto aval = av.array();

      a_bar.resize(kStreams * n, arch_.hidden_width);
      sa(a_bar, n, kVal) = sa(h_bar, n, kVal) * g + sa(h_bar, n, kDx) * gdx +
                           sa(h_bar, n, kDy) * gdy + sa(h_bar, n, kDxx) * gdxx +
                           sa(h_bar, n, kDyy) * gdyy;
      sa(a_bar, n, kDx) = sa(h_bar, n, kDx) * g + 2.0 * sa(h_bar, n, kDxx) * gdx;
      sa(a_bar, n, kDy) = sa(h_bar, n, kDy) * g + 2.0 * sa(h_bar, n, kDyy) * gdy;
      sa(a_bar, n, kDxx) = sa(h_bar, n, kDxx) * g;
      sa(a_bar, n, kDyy) = sa(h_bar, n, kDyy) * g;

      const Arr mixed = sa(h_bar, n, kDx) * a_dx + sa(h_bar, n, kDy) * a_dy +
                        sa(h_bar, n, kDxx) * a_dxx + sa(h_bar, n, kDyy) * a_dyy;
      sa(enc_bar[0], n, kVal) += sa(h_bar, n, kVal) * (1.0 - aval) - mixed;
      sa(enc_bar[1], n, kVal) += sa(h_bar, n, kVal) * aval + mixed;
      sa(enc_bar[0], n, kDx) += sa(h_bar, n, kDx) * (1.0 - aval) - 2.0 * sa(h_bar, n, kDxx) * a_dx;
      sa(enc_bar[1], n, kDx) += sa(h_bar, n, kDx) * aval + 2.0 * sa(h_bar, n, kDxx) * a_dx;
      sa(enc_bar[0], n, kDy) += sa(h_bar, n, kDy) * (1.0 - aval) - 2.0 * sa(h_bar, n, kDyy) * a_dy;
      sa(enc_bar[1], n, kDy) += sa(h_bar, n, kDy) * aval + 2.0 * sa(h_bar, n, kDyy) * a_dy;
      sa(enc_bar[0], n, kDxx) += sa(h_bar, n, kDxx) * (1.0 - aval);
      sa(enc_bar[1], n, kDxx) += sa(h_bar, n, kDxx) * aval;
      sa(enc_bar[0], n, kDyy) += sa(h_bar, n, kDyy) * (1.0 - aval);
      sa(enc_bar[1], n, kDyy) += sa(h_bar, n, kDyy) * aval;
    } else {
      a_bar.swap(h_bar);
    }

    activate_jets_reverse(z, av, n, arch_.activation, a_bar, z_bar);
    affine_reverse(z_bar, h_[ki], layout_.hidden[ki], k > 0 ? &h_bar : nullptr);
  }

  if (layout_.has_encoders) {
    const ParamLayout::Block* blocks[2] = {&layout_.encoder1, &layout_.encoder2};
    for (int e = 0; e < 2; ++e) {
      activate_jets_reverse(enc_z_[e], enc_v_[e], n, arch_.activation, enc_bar[e], z_bar);
      affine_reverse(z_bar, input_, *blocks[e], nullptr);
    }
  }

  return grad;
}

LossGradient LossEvaluator::loss_gradient(const NetworkParams& params, const ResidualBatch& batch,
                                          const LossSpec& spec) {
  params.validate();
  if (!(params.arch == arch_)) throw StructuralError("evaluator: architecture mismatch");
  if (batch.empty()) throw DegenerateInputError("loss_gradient: empty batch");
  spec.validate();

  const PointBatch pts = batch.all_points();
  forward(params.flat, pts);
  const FieldEval eval = output_field();

  LossGradient result;
  result.breakdown = total_loss(eval, batch, spec);

  const Eigen::Index n = n_;
  const Eigen::Index nc = batch.collocation.rows();
  Mat out_bar = Mat::Zero(kStreams * n, arch_.output_dim);

  if (nc > 0) {
    FieldEval in;
    in.u = eval.u.head(nc);
    in.v = eval.v.head(nc);
    in.p = eval.p.head(nc);
    in.du_dx = eval.du_dx.head(nc);
    in.du_dy = eval.du_dy.head(nc);
    in.dv_dx = eval.dv_dx.head(nc);
    in.dv_dy = eval.dv_dy.head(nc);
    in.dp_dx = eval.dp_dx.head(nc);
    in.dp_dy = eval.dp_dy.head(nc);
    in.d2u_dx2 = eval.d2u_dx2.head(nc);
    in.d2u_dy2 = eval.d2u_dy2.head(nc);
    in.d2v_dx2 = eval.d2v_dx2.head(nc);
    in.d2v_dy2 = eval.d2v_dy2.head(nc);
    const Residuals r = residuals(in, spec.reynolds);

    const double c = 2.0 * spec.weight_residual / static_cast<double>(nc);
    const Vec rx = c * r.r_x, ry = c * r.r_y, rc = c * r.r_c;
    const double inv_re = 1.0 / spec.reynolds;

    auto seg = [&](int s, int col) { return stream(out_bar, n, s).col(col).head(nc); };
    seg(kVal, 0) = (rx.array() * in.du_dx.array() + ry.array() * in.dv_dx.array()).matrix();
    seg(kVal, 1) = (rx.array() * in.du_dy.array() + ry.array() * in.dv_dy.array()).matrix();
    seg(kDx, 0) = (rx.array() * in.u.array() + rc.array()).matrix();
    seg(kDy, 0) = (rx.array() * in.v.array()).matrix();
    seg(kDx, 1) = (ry.array() * in.u.array()).matrix();
    seg(kDy, 1) = (ry.array() * in.v.array() + rc.array()).matrix();
    seg(kDx, 2) = rx;
    seg(kDy, 2) = ry;
    seg(kDxx, 0) = -inv_re * rx;
    seg(kDyy, 0) = -inv_re * rx;
    seg(kDxx, 1) = -inv_re * ry;
    seg(kDyy, 1) = -inv_re * ry;
  }

  if (result.breakdown.boundary_terms > 0) {
    const double c =
        2.0 * spec.weight_boundary / static_cast<double>(result.breakdown.boundary_terms);
    Eigen::Index row = nc;
    for (const auto& b : batch.boundary) {
      if (b.kind == BoundaryKind::kOutlet) {
        out_bar(row, 2) += c * (eval.p(row) - b.p);
      } else {
        out_bar(row, 0) += c * (eval.u(row) - b.u);
        out_bar(row, 1) += c * (eval.v(row) - b.v);
      }
      ++row;
    }
  }

  if (result.breakdown.data_terms > 0) {
    const double c = 2.0 * spec.weight_data / static_cast<double>(result.breakdown.data_terms);
    Eigen::Index row = nc + static_cast<Eigen::Index>(batch.boundary.size());
    for (const auto& d : batch.data) {
      if (d.supervise_u) out_bar(row, 0) += c * (eval.u(row) - d.u);
      if (d.supervise_v) out_bar(row, 1) += c * (eval.v(row) - d.v);
      ++row;
    }
  }

  result.grad = backward(params.flat, out_bar);
  return result;
}

FieldEval evaluate_with_input_derivatives(const NetworkParams& params, const PointBatch& points) {
  LossEvaluator eval(params.arch);
  return eval.evaluate(params, points);
}

LossGradient loss_gradient(const NetworkParams& params, const ResidualBatch& batch,
                           const LossSpec& spec) {
  LossEvaluator eval(params.arch);
  return eval.loss_gradient(params, batch, spec);
}

}  // namespace seqpinn
