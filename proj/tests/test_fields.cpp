#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "sphereflow/errors.hpp"
#include "sphereflow/fields.hpp"
#include "test_util.hpp"

using namespace sphereflow;
using testutil::l2_norm;
using testutil::max_abs;
using testutil::max_coeff;
using testutil::random_scalar;

namespace {
constexpr double kPi = std::numbers::pi;

VelocityGrid random_velocity(const Transform& tf, std::mt19937& rng) {
  const int L = tf.L();
  const SpectralScalar psi = random_scalar(L, tf.grid().radius, L / 2, rng);
  const SpectralScalar chi = random_scalar(L, tf.grid().radius, L / 2, rng);
  const VelocityGrid rotational =
      velocity_from_stream(tf, StreamFunction(psi));
  return axpy(1.0, gradient_field(tf, chi), rotational);
}
}  // namespace

TEST_CASE("K sends the zonal rotation eastward field to -a sin(phi) southward") {
  const Transform tf(build_grid(8, 2.0));
  const KillingBasis basis = make_killing_basis(tf);
  const VelocityGrid k = apply_K(basis.zz);
  const Grid& g = tf.grid();
  for (int j = 0; j < g.n_phi; ++j)
    for (int kk = 0; kk < g.n_theta; ++kk) {
      CHECK(std::abs(k.u_theta.at(j, kk)) <= 1e-12);
      CHECK(std::abs(k.u_phi.at(j, kk) + g.radius * g.sin_phi[j]) <= 1e-12);
    }
}

TEST_CASE("K squares to minus the identity and is pointwise skew") {
  const Transform tf(build_grid(8, 1.0));
  std::mt19937 rng(21);
  const VelocityGrid u = random_velocity(tf, rng);
  const VelocityGrid kku = apply_K(apply_K(u));
  for (std::size_t i = 0; i < u.u_theta.v.size(); ++i) {
    CHECK(kku.u_theta.v[i] == -u.u_theta.v[i]);
    CHECK(kku.u_phi.v[i] == -u.u_phi.v[i]);
  }
  CHECK(max_abs(pointwise_dot(apply_K(u), u)) == 0.0);
  CHECK(std::abs(inner_product(tf.grid(), u, apply_K(u))) == 0.0);
}

TEST_CASE("the (1,0) stream function generates rigid rotation") {
  const double a = 2.0, c = 0.7;
  const Transform tf(build_grid(8, a));
  SpectralScalar psi(8, a);
  psi.at(1, 0) = -c * a * a * std::sqrt(4.0 * kPi / 3.0);  // -c a^2 cos(phi)
  const VelocityGrid u = velocity_from_stream(tf, StreamFunction(psi));
  const Grid& g = tf.grid();
  for (int j = 0; j < g.n_phi; ++j)
    for (int k = 0; k < g.n_theta; ++k) {
      CHECK(std::abs(u.u_theta.at(j, k) - c * a * g.sin_phi[j]) <= 1e-12);
      CHECK(std::abs(u.u_phi.at(j, k)) <= 1e-13);
    }
}

TEST_CASE("stream fields are divergence-free and zero stream gives zero flow") {
  const Transform tf(build_grid(15, 1.0));
  std::mt19937 rng(4);
  const SpectralScalar psi = random_scalar(15, 1.0, 7, rng);
  const VelocityGrid u = velocity_from_stream(tf, StreamFunction(psi));
  CHECK(max_abs(tf.synthesize(div_of(tf, u))) <= 1e-9);
  const VelocityGrid z =
      velocity_from_stream(tf, StreamFunction(SpectralScalar(15, 1.0)));
  CHECK(max_speed(z) == 0.0);
}

TEST_CASE("stream-function construction pins the mean to zero") {
  SpectralScalar raw(8, 1.0);
  raw.at(0, 0) = 5.0;
  raw.at(2, 1) = 1.0;
  const StreamFunction sf(raw);
  CHECK(std::abs(sf.psi.at(0, 0)) == 0.0);
  CHECK(std::abs(sf.psi.at(2, 1) - 1.0) == 0.0);
}

TEST_CASE("vorticity of a stream function is +l(l+1)/a^2 psi") {
  SpectralScalar psi(8, 2.0);
  psi.at(1, 0) = 3.0;
  psi.at(2, 1) = {1.0, -2.0};
  const SpectralScalar zeta = vorticity_from_stream(StreamFunction(psi));
  CHECK(std::abs(zeta.at(1, 0) - 3.0 * 2.0 / 4.0) <= 1e-15);
  CHECK(std::abs(zeta.at(2, 1) - std::complex<double>(1.0, -2.0) * 6.0 / 4.0) <=
        1e-14);
}

TEST_CASE("grid curl of a stream field matches the spectral vorticity") {
  const Transform tf(build_grid(15, 1.3));
  std::mt19937 rng(6);
  const SpectralScalar psi = random_scalar(15, 1.3, 7, rng);
  const StreamFunction sf(psi);
  const SpectralScalar expected = vorticity_from_stream(sf);
  const SpectralScalar measured = rot_of(tf, velocity_from_stream(tf, sf));
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.c.size(); ++i)
    worst = std::max(worst, std::abs(measured.c[i] - expected.c[i]));
  CHECK(worst <= 1e-8 * std::max(1.0, max_coeff(expected)));
}

TEST_CASE("helmholtz decomposition separates stream and potential parts") {
  const Transform tf(build_grid(15, 1.0));
  std::mt19937 rng(17);
  const SpectralScalar psi = random_scalar(15, 1.0, 7, rng);
  const SpectralScalar chi = random_scalar(15, 1.0, 7, rng);

  const HelmholtzParts pure_grad =
      helmholtz_decompose(tf, gradient_field(tf, chi));
  CHECK(max_coeff(pure_grad.psi) <= 1e-10);
  double worst = 0.0;
  for (int l = 1; l <= 15; ++l)
    for (int m = 0; m <= l; ++m)
      worst = std::max(worst, std::abs(pure_grad.chi.at(l, m) - chi.at(l, m)));
  CHECK(worst <= 1e-10);

  const HelmholtzParts pure_stream =
      helmholtz_decompose(tf, velocity_from_stream(tf, StreamFunction(psi)));
  CHECK(max_coeff(pure_stream.chi) <= 1e-10);

  // Mixed field reconstructs.
  const VelocityGrid u = axpy(1.0, gradient_field(tf, chi),
                              velocity_from_stream(tf, StreamFunction(psi)));
  const HelmholtzParts parts = helmholtz_decompose(tf, u);
  const VelocityGrid back =
      axpy(1.0, gradient_field(tf, parts.chi),
           velocity_from_stream(tf, StreamFunction(parts.psi)));
  CHECK(max_speed(axpy(-1.0, back, u)) <= 1e-8);
}

TEST_CASE("divergence-free projection is idempotent and symmetric") {
  const Transform tf(build_grid(15, 1.0));
  std::mt19937 rng(23);
  const VelocityGrid u = random_velocity(tf, rng);
  const VelocityGrid v = random_velocity(tf, rng);
  const VelocityGrid pu = project_divergence_free(tf, u);
  const VelocityGrid ppu = project_divergence_free(tf, pu);
  CHECK(max_speed(axpy(-1.0, ppu, pu)) <= 1e-10);
  const double lhs = inner_product(tf.grid(), pu, v);
  const double rhs = inner_product(tf.grid(), u, project_divergence_free(tf, v));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("covariant gradient of the zonal rotation matches hand values") {
  const Transform tf(build_grid(8, 1.0));
  const ChristoffelTable ch = christoffel_table(tf.grid());
  const KillingBasis basis = make_killing_basis(tf);
  const TensorGrid t = covariant_gradient(tf, ch, basis.zz);
  const Grid& g = tf.grid();
  for (int j = 0; j < g.n_phi; ++j) {
    const double cot = g.cos_phi[j] / g.sin_phi[j];
    for (int k = 0; k < g.n_theta; ++k) {
      CHECK(std::abs(t.tt.at(j, k)) <= 1e-10);
      CHECK(std::abs(t.tp.at(j, k) - cot) <= 1e-10 * std::max(1.0, std::abs(cot)));
      CHECK(std::abs(t.pt.at(j, k) + g.sin_phi[j] * g.cos_phi[j]) <= 1e-10);
      CHECK(std::abs(t.pp.at(j, k)) <= 1e-10);
    }
  }
}

TEST_CASE("covariant gradient is linear and vanishes on the zero field") {
  const Transform tf(build_grid(8, 1.0));
  const ChristoffelTable ch = christoffel_table(tf.grid());
  std::mt19937 rng(31);
  const VelocityGrid u = random_velocity(tf, rng);
  const VelocityGrid v = random_velocity(tf, rng);
  const TensorGrid tu = covariant_gradient(tf, ch, u);
  const TensorGrid tv = covariant_gradient(tf, ch, v);
  const TensorGrid ts = covariant_gradient(tf, ch, axpy(1.0, u, v));
  double worst = 0.0;
  for (std::size_t i = 0; i < tu.tt.v.size(); ++i) {
    worst = std::max(worst, std::abs(ts.tt.v[i] - tu.tt.v[i] - tv.tt.v[i]));
    worst = std::max(worst, std::abs(ts.tp.v[i] - tu.tp.v[i] - tv.tp.v[i]));
    worst = std::max(worst, std::abs(ts.pt.v[i] - tu.pt.v[i] - tv.pt.v[i]));
    worst = std::max(worst, std::abs(ts.pp.v[i] - tu.pp.v[i] - tv.pp.v[i]));
  }
  CHECK(worst <= 1e-10);

  const TensorGrid tz = covariant_gradient(tf, ch, VelocityGrid(
      tf.grid().n_phi, tf.grid().n_theta));
  CHECK(max_abs(tz.tt) <= 1e-14);
  CHECK(max_abs(tz.tp) <= 1e-14);
  CHECK(max_abs(tz.pt) <= 1e-14);
  CHECK(max_abs(tz.pp) <= 1e-14);
}

TEST_CASE("self-advection of a rigid rotation is a pure gradient") {
  // nabla_z z = -1/2 grad |z|^2; for z = d/dtheta that is
  // (0, -a sin(phi) cos(phi)) in the orthonormal frame.
  const double a = 1.5;
  const Transform tf(build_grid(8, a));
  const ChristoffelTable ch = christoffel_table(tf.grid());
  const KillingBasis basis = make_killing_basis(tf);
  const VelocityGrid adv =
      advection(tf.grid(), basis.zz, covariant_gradient(tf, ch, basis.zz));
  const Grid& g = tf.grid();
  for (int j = 0; j < g.n_phi; ++j)
    for (int k = 0; k < g.n_theta; ++k) {
      CHECK(std::abs(adv.u_theta.at(j, k)) <= 1e-10);
      CHECK(std::abs(adv.u_phi.at(j, k) + a * g.sin_phi[j] * g.cos_phi[j]) <=
            1e-10);
    }
}

TEST_CASE("killing fields have vanishing deformation, including combinations") {
  for (double a : {1.0, 2.0}) {
    const Transform tf(build_grid(8, a));
    const ChristoffelTable ch = christoffel_table(tf.grid());
    const KillingBasis basis = make_killing_basis(tf);
    CHECK(deformation_norm_sq(tf, ch, basis.zx) <= 1e-9);
    CHECK(deformation_norm_sq(tf, ch, basis.zy) <= 1e-9);
    CHECK(deformation_norm_sq(tf, ch, basis.zz) <= 1e-9);
    const VelocityGrid combo =
        axpy(0.3, basis.zx, axpy(-0.7, basis.zy, basis.zz));
    CHECK(deformation_norm_sq(tf, ch, combo) <= 1e-9);
  }
}

TEST_CASE("deformation energies match spectral closed forms") {
  const Transform tf(build_grid(8, 1.0));
  const ChristoffelTable ch = christoffel_table(tf.grid());

  // Stream mode (2,0): 1/2 l(l+1)(l(l+1)-2) = 12.
  SpectralScalar y20(8, 1.0);
  y20.at(2, 0) = 1.0;
  const VelocityGrid rot = velocity_from_stream(tf, StreamFunction(y20));
  CHECK(std::abs(deformation_norm_sq(tf, ch, rot) - 12.0) <= 1e-8);

  // Gradient mode (2,0): (l(l+1))^2 - kappa l(l+1) = 36 - 6 = 30.
  const VelocityGrid grd = gradient_field(tf, y20);
  CHECK(std::abs(deformation_norm_sq(tf, ch, grd) - 30.0) <= 1e-8);

  // Stream mode (3,2): deformation 120, full gradient norm 264.
  SpectralScalar y32(8, 1.0);
  y32.at(3, 2) = 1.0;
  const VelocityGrid u32 = velocity_from_stream(tf, StreamFunction(y32));
  CHECK(std::abs(deformation_norm_sq(tf, ch, u32) - 120.0) <= 2e-8);
  CHECK(std::abs(grad_norm_sq(tf, ch, u32) - 264.0) <= 2e-8);

  // Quadratic scaling.
  const double d1 = deformation_norm_sq(tf, ch, u32);
  const double d2 = deformation_norm_sq(tf, ch, axpy(1.0, u32, u32));
  CHECK(std::abs(d2 - 4.0 * d1) <= 1e-10 * d2);
}

TEST_CASE("gradient norm splits into deformation and curvature for stream fields") {
  const double a = 1.4;
  const Transform tf(build_grid(15, a));
  const ChristoffelTable ch = christoffel_table(tf.grid());
  std::mt19937 rng(8);
  const SpectralScalar psi = random_scalar(15, a, 7, rng);
  const VelocityGrid u = velocity_from_stream(tf, StreamFunction(psi));
  const double lhs = grad_norm_sq(tf, ch, u);
  const double rhs = 2.0 * deformation_norm_sq(tf, ch, u) +
                     inner_product(tf.grid(), u, u) / (a * a);
  CHECK(std::abs(lhs - rhs) <= 1e-8 * lhs);
}

TEST_CASE("inner products of the killing basis") {
  for (double a : {1.0, 1.5}) {
    const Transform tf(build_grid(8, a));
    const KillingBasis basis = make_killing_basis(tf);
    const double expected = 8.0 * kPi * std::pow(a, 4) / 3.0;
    CHECK(std::abs(inner_product(tf.grid(), basis.zz, basis.zz) - expected) <=
          1e-10 * expected);
    CHECK(std::abs(basis.norm_sq - expected) <= 1e-10 * expected);
    CHECK(std::abs(inner_product(tf.grid(), basis.zx, basis.zz)) <= 1e-9);
    CHECK(std::abs(inner_product(tf.grid(), basis.zx, basis.zy)) <= 1e-9);
    CHECK(std::abs(inner_product(tf.grid(), basis.zy, basis.zz)) <= 1e-9);
  }
}

TEST_CASE("inner_product rejects mismatched shapes") {
  const Transform tf(build_grid(8, 1.0));
  const KillingBasis basis = make_killing_basis(tf);
  VelocityGrid wrong(3, 4);
  CHECK_THROWS_AS(inner_product(tf.grid(), basis.zz, wrong),
                  InvalidParameterError);
}

TEST_CASE("zonal projection recovers rotation rates and residuals") {
  const Transform tf(build_grid(8, 1.0));
  const KillingBasis basis = make_killing_basis(tf);
  const Grid& g = tf.grid();

  const ZonalProjection p3 = project_onto_zonal(g, basis, axpy(2.0, basis.zz, basis.zz));
  CHECK(std::abs(p3.c - 3.0) <= 1e-12);
  CHECK(max_speed(p3.residual) <= 1e-10);

  const ZonalProjection px = project_onto_zonal(g, basis, basis.zx);
  CHECK(std::abs(px.c) <= 1e-12);

  const ZonalProjection pm =
      project_onto_zonal(g, basis, axpy(1.0, basis.zz, basis.zx));
  CHECK(std::abs(pm.c - 1.0) <= 1e-12);
  CHECK(l2_norm(g, axpy(-1.0, basis.zx, pm.residual)) <= 1e-9);
  CHECK(std::abs(inner_product(g, pm.residual, basis.zz)) <= 1e-10);
}

TEST_CASE("curl annihilates gradients") {
  const Transform tf(build_grid(15, 1.0));
  std::mt19937 rng(12);
  const SpectralScalar chi = random_scalar(15, 1.0, 7, rng);
  CHECK(max_coeff(rot_of(tf, gradient_field(tf, chi))) <= 1e-9);
}

TEST_CASE("divergence pairs against gradients with a sign flip") {
  const Transform tf(build_grid(15, 1.0));
  std::mt19937 rng(14);
  const VelocityGrid u = random_velocity(tf, rng);
  const SpectralScalar hc = random_scalar(15, 1.0, 7, rng);
  const GridScalar h = tf.synthesize(hc);
  const GridScalar divu = tf.synthesize(div_of(tf, u));
  GridScalar prod(h.n_phi, h.n_theta);
  for (std::size_t i = 0; i < prod.v.size(); ++i)
    prod.v[i] = divu.v[i] * h.v[i];
  const double lhs = integrate(tf.grid(), prod);
  const double rhs = -inner_product(tf.grid(), u, gradient_field(tf, hc));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
}
