#include "sphereflow/fields.hpp"

#include <cmath>
#include <numbers>

#include "sphereflow/errors.hpp"

namespace sphereflow {

VelocityGrid apply_K(const VelocityGrid& u) {
  VelocityGrid r;
  r.u_theta = u.u_phi;
  r.u_phi = u.u_theta;
  for (auto& x : r.u_phi.v) x = -x;
  return r;
}

VelocityGrid velocity_from_stream(const Transform& tf, const StreamFunction& s) {
  const double inva = 1.0 / tf.grid().radius;
  VelocityGrid u;
  u.u_theta = tf.synthesize_dphi(s.psi);
  u.u_phi = tf.synthesize_dtheta_over_sin(s.psi);
  for (auto& x : u.u_theta.v) x *= inva;
  for (auto& x : u.u_phi.v) x *= -inva;
  return u;
}

VelocityGrid gradient_field(const Transform& tf, const SpectralScalar& chi) {
  const double inva = 1.0 / tf.grid().radius;
  VelocityGrid u;
  u.u_theta = tf.synthesize_dtheta_over_sin(chi);
  u.u_phi = tf.synthesize_dphi(chi);
  for (auto& x : u.u_theta.v) x *= inva;
  for (auto& x : u.u_phi.v) x *= inva;
  return u;
}

SpectralScalar vorticity_from_stream(const StreamFunction& s) {
  SpectralScalar z = laplacian(s.psi);
  for (auto& x : z.c) x = -x;
  return z;
}

SpectralScalar rot_of(const Transform& tf, const VelocityGrid& u) {
  return tf.vector_analysis(u.u_theta, u.u_phi);
}

SpectralScalar div_of(const Transform& tf, const VelocityGrid& u) {
  GridScalar neg_up = u.u_phi;
  for (auto& x : neg_up.v) x = -x;
  return tf.vector_analysis(neg_up, u.u_theta);
}

HelmholtzParts helmholtz_decompose(const Transform& tf, const VelocityGrid& u) {
  SpectralScalar rot = rot_of(tf, u);
  for (auto& x : rot.c) x = -x;
  rot.at(0, 0) = 0.0;  // quadrature roundoff; rot integrates to zero exactly
  SpectralScalar div = div_of(tf, u);
  div.at(0, 0) = 0.0;
  HelmholtzParts parts{invert_laplacian(rot), invert_laplacian(div)};
  return parts;
}

VelocityGrid project_divergence_free(const Transform& tf, const VelocityGrid& u) {
  SpectralScalar rot = rot_of(tf, u);
  for (auto& x : rot.c) x = -x;
  rot.at(0, 0) = 0.0;
  return velocity_from_stream(tf, StreamFunction(invert_laplacian(rot)));
}

TensorGrid covariant_gradient_potentials(const Transform& tf,
                                         const ChristoffelTable& ch,
                                         const SpectralScalar& psi,
                                         const SpectralScalar& chi) {
  const Grid& g = tf.grid();
  const double a2 = g.radius * g.radius;
  const JetTable P = tf.jet(psi, 2);
  const JetTable C = tf.jet(chi, 2);

  TensorGrid t{GridScalar(g.n_phi, g.n_theta), GridScalar(g.n_phi, g.n_theta),
               GridScalar(g.n_phi, g.n_theta), GridScalar(g.n_phi, g.n_theta)};

  for (int j = 0; j < g.n_phi; ++j) {
    const double s = g.sin_phi[j];
    const double c = g.cos_phi[j];
    const double iA = 1.0 / (a2 * s);        // 1/(a^2 sin)
    const double iS2 = 1.0 / (a2 * s * s);   // 1/(a^2 sin^2)
    const double iS3 = 1.0 / (a2 * s * s * s);
    const double g_ttp = ch.gamma_ttp[j];    // cot(phi)
    const double g_ptt = ch.gamma_ptt[j];    // -sin cos
    for (int k = 0; k < g.n_theta; ++k) {
      const double p01 = P.d[0][1].at(j, k), p10 = P.d[1][0].at(j, k);
      const double p11 = P.d[1][1].at(j, k), p20 = P.d[2][0].at(j, k);
      const double p02 = P.d[0][2].at(j, k);
      const double c10 = C.d[1][0].at(j, k), c01 = C.d[0][1].at(j, k);
      const double c20 = C.d[2][0].at(j, k), c11 = C.d[1][1].at(j, k);
      const double c02 = C.d[0][2].at(j, k);

      // Coordinate components u^1, u^2 and their partial derivatives.
      const double u1 = p01 * iA + c10 * iS2;
      const double u2 = -p10 * iA + c01 / a2;
      const double du1_dt = p11 * iA + c20 * iS2;
      const double du1_dp = p02 * iA - p01 * c * iS2 + c11 * iS2 - 2.0 * c * c10 * iS3;
      const double du2_dt = -p20 * iA + c11 / a2;
      const double du2_dp = -p11 * iA + p10 * c * iS2 + c02 / a2;

      t.tt.at(j, k) = du1_dt + g_ttp * u2;
      t.tp.at(j, k) = du1_dp + g_ttp * u1;
      t.pt.at(j, k) = du2_dt + g_ptt * u1;
      t.pp.at(j, k) = du2_dp;
    }
  }
  return t;
}

TensorGrid covariant_gradient(const Transform& tf, const ChristoffelTable& ch,
                              const VelocityGrid& u) {
  const HelmholtzParts parts = helmholtz_decompose(tf, u);
  return covariant_gradient_potentials(tf, ch, parts.psi, parts.chi);
}

VelocityGrid advection(const Grid& g, const VelocityGrid& u,
                       const TensorGrid& gradu) {
  const double a = g.radius;
  VelocityGrid out(g.n_phi, g.n_theta);
  for (int j = 0; j < g.n_phi; ++j) {
    const double s = g.sin_phi[j];
    for (int k = 0; k < g.n_theta; ++k) {
      const double u1 = u.u_theta.at(j, k) / (a * s);
      const double u2 = u.u_phi.at(j, k) / a;
      const double a1 = u1 * gradu.tt.at(j, k) + u2 * gradu.tp.at(j, k);
      const double a2c = u1 * gradu.pt.at(j, k) + u2 * gradu.pp.at(j, k);
      out.u_theta.at(j, k) = a * s * a1;
      out.u_phi.at(j, k) = a * a2c;
    }
  }
  return out;
}

namespace {

// |T|^2_g of a mixed (1,1) tensor on the diagonal metric:
// sum_{i,j} (T^i_j)^2 g_{ii} g^{jj}.
double tensor_norm_sq_at(double ttv, double tpv, double ptv, double ppv,
                         double s) {
  return ttv * ttv + s * s * tpv * tpv + ptv * ptv / (s * s) + ppv * ppv;
}

}  // namespace

double deformation_norm_sq(const Transform& tf, const ChristoffelTable& ch,
                           const VelocityGrid& u) {
  const Grid& g = tf.grid();
  const TensorGrid t = covariant_gradient(tf, ch, u);
  GridScalar dens(g.n_phi, g.n_theta);
  for (int j = 0; j < g.n_phi; ++j) {
    const double s = g.sin_phi[j];
    for (int k = 0; k < g.n_theta; ++k) {
      // Metric transpose: (T^T)^1_2 = G^2_1/s^2, (T^T)^2_1 = s^2 G^1_2.
      const double d_tt = t.tt.at(j, k);
      const double d_tp = 0.5 * (t.tp.at(j, k) + t.pt.at(j, k) / (s * s));
      const double d_pt = 0.5 * (t.pt.at(j, k) + s * s * t.tp.at(j, k));
      const double d_pp = t.pp.at(j, k);
      dens.at(j, k) = tensor_norm_sq_at(d_tt, d_tp, d_pt, d_pp, s);
    }
  }
  return integrate(g, dens);
}

double grad_norm_sq(const Transform& tf, const ChristoffelTable& ch,
                    const VelocityGrid& u) {
  const Grid& g = tf.grid();
  const TensorGrid t = covariant_gradient(tf, ch, u);
  GridScalar dens(g.n_phi, g.n_theta);
  for (int j = 0; j < g.n_phi; ++j) {
    const double s = g.sin_phi[j];
    for (int k = 0; k < g.n_theta; ++k)
      dens.at(j, k) = tensor_norm_sq_at(t.tt.at(j, k), t.tp.at(j, k),
                                        t.pt.at(j, k), t.pp.at(j, k), s);
  }
  return integrate(g, dens);
}

VelocityGrid deformation_divergence(const Transform& tf,
                                    const ChristoffelTable& ch,
                                    const StreamFunction& s) {
  const Grid& g = tf.grid();
  const double a = g.radius;
  const double a2 = a * a;
  const JetTable T = tf.jet(s.psi, 3);

  VelocityGrid out(g.n_phi, g.n_theta);
  for (int j = 0; j < g.n_phi; ++j) {
    const double sp = g.sin_phi[j];
    const double cp = g.cos_phi[j];
    const double iA = 1.0 / (a2 * sp);
    const double iS2 = 1.0 / (a2 * sp * sp);
    const double iS3 = 1.0 / (a2 * sp * sp * sp);
    const double cot = ch.gamma_ttp[j];
    const double sc = -ch.gamma_ptt[j];      // sin cos
    const double dcot = -1.0 / (sp * sp);    // d cot/dphi
    for (int k = 0; k < g.n_theta; ++k) {
      const double t10 = T.d[1][0].at(j, k), t01 = T.d[0][1].at(j, k);
      const double t20 = T.d[2][0].at(j, k), t11 = T.d[1][1].at(j, k);
      const double t02 = T.d[0][2].at(j, k);
      const double t30 = T.d[3][0].at(j, k), t21 = T.d[2][1].at(j, k);
      const double t12 = T.d[1][2].at(j, k), t03 = T.d[0][3].at(j, k);

      const double u1 = t01 * iA;
      const double u2 = -t10 * iA;
      const double du1_dt = t11 * iA;
      const double du1_dp = t02 * iA - t01 * cp * iS2;
      const double du2_dt = -t20 * iA;
      const double du2_dp = -t11 * iA + t10 * cp * iS2;
      const double dtt_u1 = t21 * iA;
      const double dtp_u1 = t12 * iA - t11 * cp * iS2;
      const double dpp_u1 =
          t03 * iA - 2.0 * t02 * cp * iS2 + t01 * (1.0 + cp * cp) * iS3;
      const double dtt_u2 = -t30 * iA;
      const double dtp_u2 = -t21 * iA + t20 * cp * iS2;
      const double dpp_u2 =
          -t12 * iA + 2.0 * t11 * cp * iS2 - t10 * (1.0 + cp * cp) * iS3;

      const double G11 = du1_dt + cot * u2;
      const double G12 = du1_dp + cot * u1;
      const double G21 = du2_dt - sc * u1;
      const double G22 = du2_dp;

      const double dG11_dt = dtt_u1 + cot * du2_dt;
      const double dG12_dt = dtp_u1 + cot * du1_dt;
      const double dG12_dp = dpp_u1 + dcot * u1 + cot * du1_dp;
      const double dG21_dt = dtt_u2 - sc * du1_dt;
      const double dG21_dp = dtp_u2 - (cp * cp - sp * sp) * u1 - sc * du1_dp;
      const double dG22_dp = dpp_u2;

      // Contravariant deformation components (1/2 convention) and their
      // partial derivatives via the product rule on the metric factors.
      const double D11 = G11 * iS2;
      const double D12 = 0.5 * (G12 / a2 + G21 * iS2);
      const double D22 = G22 / a2;
      const double dD11_dt = dG11_dt * iS2;
      const double dD12_dp =
          0.5 * (dG12_dp / a2 + dG21_dp * iS2 - 2.0 * cp * G21 * iS3);
      const double dD12_dt = 0.5 * (dG12_dt / a2 + dG21_dt * iS2);
      const double dD22_dp = dG22_dp / a2;

      const double div1 = dD11_dt + dD12_dp + 3.0 * cot * D12;
      const double div2 = dD12_dt + dD22_dp - sc * D11 + cot * D22;

      out.u_theta.at(j, k) = 2.0 * a * sp * div1;
      out.u_phi.at(j, k) = 2.0 * a * div2;
    }
  }
  return out;
}

GridScalar pointwise_dot(const VelocityGrid& u, const VelocityGrid& v) {
  if (!u.u_theta.same_shape(v.u_theta))
    throw InvalidParameterError("pointwise_dot: field shapes do not match");
  GridScalar d(u.u_theta.n_phi, u.u_theta.n_theta);
  for (std::size_t i = 0; i < d.v.size(); ++i)
    d.v[i] = u.u_theta.v[i] * v.u_theta.v[i] + u.u_phi.v[i] * v.u_phi.v[i];
  return d;
}

double inner_product(const Grid& grid, const VelocityGrid& u,
                     const VelocityGrid& v) {
  return integrate(grid, pointwise_dot(u, v));
}

double max_speed(const VelocityGrid& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.u_theta.v.size(); ++i) {
    const double sq = u.u_theta.v[i] * u.u_theta.v[i] +
                      u.u_phi.v[i] * u.u_phi.v[i];
    if (sq > m) m = sq;
  }
  return std::sqrt(m);
}

VelocityGrid axpy(double alpha, const VelocityGrid& x, const VelocityGrid& y) {
  VelocityGrid r = y;
  for (std::size_t i = 0; i < r.u_theta.v.size(); ++i) {
    r.u_theta.v[i] += alpha * x.u_theta.v[i];
    r.u_phi.v[i] += alpha * x.u_phi.v[i];
  }
  return r;
}

KillingBasis make_killing_basis(const Transform& tf) {
  const Grid& g = tf.grid();
  const double a2 = g.radius * g.radius;
  const int L = g.L;

  // Unit-rate rigid rotations have pure l = 1 stream functions:
  //   psi_z = -a^2 cos(phi), psi_x = -a^2 sin(phi) cos(theta),
  //   psi_y = -a^2 sin(phi) sin(theta).
  SpectralScalar px(L, g.radius), py(L, g.radius), pz(L, g.radius);
  const double c11 = 0.5 * a2 * std::sqrt(8.0 * std::numbers::pi / 3.0);
  pz.at(1, 0) = -a2 * std::sqrt(4.0 * std::numbers::pi / 3.0);
  px.at(1, 1) = {c11, 0.0};
  py.at(1, 1) = {0.0, -c11};

  KillingBasis b{velocity_from_stream(tf, StreamFunction(px)),
                 velocity_from_stream(tf, StreamFunction(py)),
                 velocity_from_stream(tf, StreamFunction(pz)),
                 px, py, pz, 0.0};
  b.norm_sq = inner_product(g, b.zz, b.zz);
  return b;
}

ZonalProjection project_onto_zonal(const Grid& grid, const KillingBasis& basis,
                                   const VelocityGrid& u) {
  ZonalProjection p;
  p.c = inner_product(grid, u, basis.zz) / basis.norm_sq;
  p.residual = axpy(-p.c, basis.zz, u);
  return p;
}

}  // namespace sphereflow
