#pragma once

#include "sphereflow/grid.hpp"
#include "sphereflow/harmonics.hpp"

namespace sphereflow {

// Tangent velocity sampled on the grid, stored as physical components in the
// orthonormal frame (e_theta, e_phi):
//   u_theta = a sin(phi) u^theta,  u_phi = a u^phi.
struct VelocityGrid {
  GridScalar u_theta;
  GridScalar u_phi;

  VelocityGrid() = default;
  VelocityGrid(int n_phi, int n_theta)
      : u_theta(n_phi, n_theta), u_phi(n_phi, n_theta) {}
};

// Spectral stream function; construction pins the (0,0) coefficient to zero
// (only the gradient of psi is ever observable).
struct StreamFunction {
  SpectralScalar psi;
  explicit StreamFunction(SpectralScalar p) : psi(std::move(p)) {
    psi.at(0, 0) = 0.0;
  }
};

// Covariant gradient u^i_{|j} per node, mixed components in coordinate
// indices (theta <-> 1, phi <-> 2): tt = u^1_{|1}, tp = u^1_{|2},
// pt = u^2_{|1}, pp = u^2_{|2}.
struct TensorGrid {
  GridScalar tt, tp, pt, pp;
};

struct HelmholtzParts {
  SpectralScalar psi;  // rotational potential: u_rot = K grad psi
  SpectralScalar chi;  // gradient potential:   u_grad = grad chi
};

struct ZonalProjection {
  double c = 0.0;          // coefficient of the unit rigid rotation about z
  VelocityGrid residual;   // u - c z_z
};

// Rigid-rotation generators about the x, y, z axes (unit angular speed),
// realized through their exact l = 1 stream functions.
struct KillingBasis {
  VelocityGrid zx, zy, zz;
  SpectralScalar psi_x, psi_y, psi_z;
  double norm_sq = 0.0;  // (z|z) = 8 pi a^4 / 3, same for all three
};

// Pointwise 90-degree counterclockwise rotation: (ut, up) -> (up, -ut).
VelocityGrid apply_K(const VelocityGrid& u);

// u = K grad psi: u_theta = (1/a) dpsi/dphi, u_phi = -(1/(a sin)) dpsi/dtheta.
VelocityGrid velocity_from_stream(const Transform& tf, const StreamFunction& s);

// u = grad chi (physical components).
VelocityGrid gradient_field(const Transform& tf, const SpectralScalar& chi);

// Vorticity rot(u) = -Laplace(psi), i.e. zeta_lm = +l(l+1)/a^2 psi_lm.
SpectralScalar vorticity_from_stream(const StreamFunction& s);

// Quadrature curl/divergence of grid velocity data; exact for band-limited u.
SpectralScalar rot_of(const Transform& tf, const VelocityGrid& u);
SpectralScalar div_of(const Transform& tf, const VelocityGrid& u);

// u = K grad psi + grad chi with psi = invert_laplacian(-rot u),
// chi = invert_laplacian(div u).
HelmholtzParts helmholtz_decompose(const Transform& tf, const VelocityGrid& u);

// Projection onto the divergence-free part: K grad(invert_laplacian(-rot u)).
VelocityGrid project_divergence_free(const Transform& tf, const VelocityGrid& u);

// Covariant gradient via spectral derivatives of the Helmholtz potentials;
// no finite differences.  The Christoffel terms come from the table.
TensorGrid covariant_gradient(const Transform& tf, const ChristoffelTable& ch,
                              const VelocityGrid& u);
TensorGrid covariant_gradient_potentials(const Transform& tf,
                                         const ChristoffelTable& ch,
                                         const SpectralScalar& psi,
                                         const SpectralScalar& chi);

// nabla_u u assembled pointwise from u and its covariant gradient.
VelocityGrid advection(const Grid& grid, const VelocityGrid& u,
                       const TensorGrid& gradu);

// ||D_u||^2 with D_u = (nabla u + (nabla u)^T)/2 (transpose through the
// metric), integrated over the sphere.
double deformation_norm_sq(const Transform& tf, const ChristoffelTable& ch,
                           const VelocityGrid& u);

// ||nabla u||^2 integrated over the sphere.
double grad_norm_sq(const Transform& tf, const ChristoffelTable& ch,
                    const VelocityGrid& u);

// 2 div D(u) for divergence-free u = K grad psi; equals the Bochner operator
// (Delta + kappa)u.  Assembled from the order-3 jet of psi.
VelocityGrid deformation_divergence(const Transform& tf,
                                    const ChristoffelTable& ch,
                                    const StreamFunction& s);

// L2(M) pairing integral (u|v)_g dmu by quadrature.
double inner_product(const Grid& grid, const VelocityGrid& u,
                     const VelocityGrid& v);

double max_speed(const VelocityGrid& u);

KillingBasis make_killing_basis(const Transform& tf);

// Orthogonal projection onto span(z_z): c = (u|z_z)/(z_z|z_z).
ZonalProjection project_onto_zonal(const Grid& grid, const KillingBasis& basis,
                                   const VelocityGrid& u);

// Pointwise metric inner product (u|v)_g as a grid scalar.
GridScalar pointwise_dot(const VelocityGrid& u, const VelocityGrid& v);

VelocityGrid axpy(double alpha, const VelocityGrid& x, const VelocityGrid& y);

}  // namespace sphereflow
