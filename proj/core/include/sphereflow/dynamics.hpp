#pragma once

#include <functional>

#include "sphereflow/fields.hpp"
#include "sphereflow/grid.hpp"
#include "sphereflow/harmonics.hpp"

namespace sphereflow {

struct SimParams {
  double a = 1.0;      // sphere radius
  double omega = 0.0;  // frame rotation rate
  double mu_s = 0.0;   // surface shear viscosity
  double dt = 1e-2;
  double t_end = 1.0;
  bool dealias = true;  // quadratic products are truncated to l <= L; the
                        // chosen grid sizes make that truncation alias-free,
                        // so the flag is accepted but has no further effect
};

// Prognostic state: spectral vorticity zeta = rot(u), mean-zero.
struct SimState {
  double t = 0.0;
  SpectralScalar zeta;
};

// Precomputed discrete context: grid, transform tables, Christoffel symbols,
// rigid-rotation basis.  Build once per (L, a) and share across runs.
class Model {
 public:
  Model(int L, double a)
      : tf_(build_grid(L, a)),
        christoffels_(christoffel_table(tf_.grid())),
        killing_(make_killing_basis(tf_)) {}

  const Transform& transform() const { return tf_; }
  const Grid& grid() const { return tf_.grid(); }
  const ChristoffelTable& christoffels() const { return christoffels_; }
  const KillingBasis& killing() const { return killing_; }

 private:
  Transform tf_;
  ChristoffelTable christoffels_;
  KillingBasis killing_;
};

// Stream function of a mean-zero vorticity: psi_lm = a^2 zeta_lm / (l(l+1)).
SpectralScalar stream_of_vorticity(const SpectralScalar& zeta);

// Planetary vorticity 2 omega cos(phi) as a spectral scalar (pure (1,0)).
SpectralScalar coriolis_spectral(int L, double a, double omega);

// Pseudospectral bracket J(A,B) = (dA/dphi dB/dtheta - dA/dtheta dB/dphi)
// / (a^2 sin phi), analyzed back to l <= L.  (0,0) is pinned to zero.
SpectralScalar jacobian(const Transform& tf, const SpectralScalar& A,
                        const SpectralScalar& B);

// Spectral symbol of the viscous operator on vorticity:
// d_l = -mu_s (l(l+1) - 2)/a^2.  d_1 = 0 identically.
double diffusion_symbol(int l, double mu_s, double a);

// dzeta/dt = -J(psi, zeta + f_c) + d_l zeta.
SpectralScalar rhs_vorticity(const Model& model, const SimState& state,
                             const SimParams& params);

// Velocity-form tendency -P_H(nabla_u u + Cu - mu_s (Delta + kappa) u)
// assembled covariantly: advection through the covariant gradient, Coriolis
// as -2 omega cos(phi) K u, viscous stress as 2 div D(u).  Independent of the
// spectral symbols except for the final Helmholtz projection.
VelocityGrid rhs_velocity_oracle(const Model& model, const SimState& state,
                                 const SimParams& params);

// Largest dt the advective stability bound admits for this state:
// 0.5 * min over nodes of (a dphi / |u_phi|, a sin(phi_j) dtheta / |u_theta|).
// Infinity for a quiescent state.
double admissible_dt(const Model& model, const SimState& state);

// One integrating-factor RK4 step: diffusion is propagated exactly by
// exp(d_l dt), the classical RK4 acts on the transformed bracket term.
// Throws StepSizeError (carrying the admissible dt) if params.dt violates
// the advective bound.
void step(const Model& model, SimState& state, const SimParams& params);

// Advances floor(t_end/dt) steps from state.t = 0, invoking observer at step
// indices 0, cadence, 2*cadence, ...  Throws DivergenceError (carrying the
// last finite time) if the state stops being finite.
void run(const Model& model, SimState& state, const SimParams& params,
         int cadence, const std::function<void(const SimState&)>& observer);

}  // namespace sphereflow
