#include "seqpinn/physics.hpp"

#include <cmath>
#include <string>

#include "seqpinn/errors.hpp"

namespace seqpinn {

void FieldEval::validate() const {
  const Eigen::Index n = u.size();
  const Vec* fields[] = {&u,     &v,     &p,     &du_dx,   &du_dy,   &dv_dx,  &dv_dy,
                         &dp_dx, &dp_dy, &d2u_dx2, &d2u_dy2, &d2v_dx2, &d2v_dy2};
  for (const Vec* f : fields) {
    if (f->size() != n) throw StructuralError("field eval: inconsistent batch lengths");
    if (!f->allFinite()) throw StructuralError("field eval: non-finite entry");
  }
}

FluidConstants FluidConstants::from_physical(double rho, double mu, double U, double D) {
  FluidConstants c;
  c.rho = rho;
  c.mu = mu;
  c.U = U;
  c.D = D;
  c.nu = mu / rho;
  c.Re = rho * U * D / mu;
  c.validate();
  return c;
}

void FluidConstants::validate() const {
  for (double value : {rho, mu, nu, U, D, Re})
    if (!(value > 0) || !std::isfinite(value))
      throw StructuralError("fluid constants: entries must be strictly positive and finite");
  const double re_check = rho * U * D / mu;
  if (std::abs(Re - re_check) > 1e-12 * std::abs(re_check))
    throw StructuralError("fluid constants: Re inconsistent with rho*U*D/mu");
  const double nu_check = mu / rho;
  if (std::abs(nu - nu_check) > 1e-12 * std::abs(nu_check))
    throw StructuralError("fluid constants: nu inconsistent with mu/rho");
}

PointBatch ResidualBatch::all_points() const {
  PointBatch pts(total_points(), 2);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < collocation.rows(); ++i, ++r) pts.row(r) = collocation.row(i);
  for (const auto& b : boundary) {
    pts(r, 0) = b.x;
    pts(r, 1) = b.y;
    ++r;
  }
  for (const auto& d : data) {
    pts(r, 0) = d.x;
    pts(r, 1) = d.y;
    ++r;
  }
  return pts;
}

void ResidualBatch::validate() const {
  if (!collocation.allFinite()) throw StructuralError("batch: non-finite collocation point");
  for (const auto& b : boundary) {
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.u) ||
        !std::isfinite(b.v) || !std::isfinite(b.p))
      throw StructuralError("batch: non-finite boundary sample");
    if (b.kind == BoundaryKind::kWall && (b.u != 0.0 || b.v != 0.0))
      throw StructuralError("batch: wall sample imposes nonzero velocity");
  }
  for (const auto& d : data) {
    if (!std::isfinite(d.x) || !std::isfinite(d.y) || !std::isfinite(d.u) || !std::isfinite(d.v))
      throw StructuralError("batch: non-finite data sample");
  }
}

void LossSpec::validate() const {
  for (double w : {weight_residual, weight_boundary, weight_data})
    if (!(w >= 0) || !std::isfinite(w)) throw StructuralError("loss spec: weights must be finite and >= 0");
  if (!(reynolds > 0)) throw DegenerateInputError("loss spec: Re must be > 0");
}

Residuals residuals(const FieldEval& eval, double reynolds) {
  if (!(reynolds > 0)) throw DegenerateInputError("residuals: Re must be > 0");
  const double inv_re = 1.0 / reynolds;
  Residuals r;
  r.r_x = (eval.u.array() * eval.du_dx.array() + eval.v.array() * eval.du_dy.array() +
           eval.dp_dx.array() - inv_re * (eval.d2u_dx2.array() + eval.d2u_dy2.array()))
              .matrix();
  r.r_y = (eval.u.array() * eval.dv_dx.array() + eval.v.array() * eval.dv_dy.array() +
           eval.dp_dy.array() - inv_re * (eval.d2v_dx2.array() + eval.d2v_dy2.array()))
              .matrix();
  r.r_c = eval.du_dx + eval.dv_dy;
  return r;
}

LossBreakdown total_loss(const FieldEval& eval, const ResidualBatch& batch, const LossSpec& spec) {
  if (batch.empty()) throw DegenerateInputError("total_loss: empty batch");
  spec.validate();
  if (eval.size() != batch.total_points())
    throw StructuralError("total_loss: eval rows do not cover the batch");

  LossBreakdown out;
  const Eigen::Index nc = batch.collocation.rows();
  out.collocation_points = nc;

  if (nc > 0) {
    FieldEval interior;
    interior.u = eval.u.head(nc);
    interior.v = eval.v.head(nc);
    interior.p = eval.p.head(nc);
    interior.du_dx = eval.du_dx.head(nc);
    interior.du_dy = eval.du_dy.head(nc);
    interior.dv_dx = eval.dv_dx.head(nc);
    interior.dv_dy = eval.dv_dy.head(nc);
    interior.dp_dx = eval.dp_dx.head(nc);
    interior.dp_dy = eval.dp_dy.head(nc);
    interior.d2u_dx2 = eval.d2u_dx2.head(nc);
    interior.d2u_dy2 = eval.d2u_dy2.head(nc);
    interior.d2v_dx2 = eval.d2v_dx2.head(nc);
    interior.d2v_dy2 = eval.d2v_dy2.head(nc);
    const Residuals r = residuals(interior, spec.reynolds);
    out.residual =
        (r.r_x.squaredNorm() + r.r_y.squaredNorm() + r.r_c.squaredNorm()) / static_cast<double>(nc);
  }

  Eigen::Index row = nc;
  double boundary_sq = 0;
  Eigen::Index boundary_terms = 0;
  for (const auto& b : batch.boundary) {
    switch (b.kind) {
      case BoundaryKind::kWall:
      case BoundaryKind::kInlet: {
        const double du = eval.u(row) - b.u;
        const double dv = eval.v(row) - b.v;
        boundary_sq += du * du + dv * dv;
        boundary_terms += 2;
        break;
      }
      case BoundaryKind::kOutlet: {
        const double dp = eval.p(row) - b.p;
        boundary_sq += dp * dp;
        boundary_terms += 1;
        break;
      }
    }
    ++row;
  }
  out.boundary_terms = boundary_terms;
  if (boundary_terms > 0) out.boundary = boundary_sq / static_cast<double>(boundary_terms);

  double data_sq = 0;
  Eigen::Index data_terms = 0;
  for (const auto& d : batch.data) {
    if (d.supervise_u) {
      const double du = eval.u(row) - d.u;
      data_sq += du * du;
      data_terms += 1;
    }
    if (d.supervise_v) {
      const double dv = eval.v(row) - d.v;
      data_sq += dv * dv;
      data_terms += 1;
    }
    ++row;
  }
  out.data_terms = data_terms;
  if (data_terms > 0) out.data = data_sq / static_cast<double>(data_terms);

  out.total = spec.weight_residual * out.residual + spec.weight_boundary * out.boundary +
              spec.weight_data * out.data;
  return out;
}

}  // namespace seqpinn
