#include "sphereflow/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "sphereflow/errors.hpp"

namespace sphereflow {

namespace {

bool all_finite(const SpectralScalar& s) {
  for (const auto& z : s.c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

SpectralScalar stream_of_vorticity(const SpectralScalar& zeta) {
  SpectralScalar psi = zeta;
  psi.at(0, 0) = 0.0;
  const double a2 = zeta.radius * zeta.radius;
  for (int l = 1; l <= zeta.L; ++l) {
    const double f = a2 / (double(l) * (l + 1));
    for (int m = 0; m <= l; ++m) psi.at(l, m) = f * zeta.at(l, m);
  }
  return psi;
}

SpectralScalar coriolis_spectral(int L, double a, double omega) {
  SpectralScalar f(L, a);
  f.at(1, 0) = 2.0 * omega * std::sqrt(4.0 * std::numbers::pi / 3.0);
  return f;
}

SpectralScalar jacobian(const Transform& tf, const SpectralScalar& A,
                        const SpectralScalar& B) {
  const Grid& g = tf.grid();
  const GridScalar dA_p = tf.synthesize_dphi(A);
  const GridScalar dA_t = tf.synthesize_dtheta_over_sin(A);
  const GridScalar dB_p = tf.synthesize_dphi(B);
  const GridScalar dB_t = tf.synthesize_dtheta_over_sin(B);
  GridScalar j(g.n_phi, g.n_theta);
  const double ia2 = 1.0 / (g.radius * g.radius);
  for (std::size_t i = 0; i < j.v.size(); ++i)
    j.v[i] = ia2 * (dA_p.v[i] * dB_t.v[i] - dA_t.v[i] * dB_p.v[i]);
  SpectralScalar out = tf.analyze(j);
  out.at(0, 0) = 0.0;  // the bracket integrates to zero; drop roundoff
  return out;
}

double diffusion_symbol(int l, double mu_s, double a) {
  return -mu_s * (double(l) * (l + 1) - 2.0) / (a * a);
}

namespace {

// Bracket part of the tendency: N(zeta) = -J(psi, zeta + f_c).
SpectralScalar bracket_tendency(const Model& model, const SpectralScalar& zeta,
                                const SimParams& params) {
  const SpectralScalar psi = stream_of_vorticity(zeta);
  SpectralScalar q = zeta;
  q.at(1, 0) += 2.0 * params.omega * std::sqrt(4.0 * std::numbers::pi / 3.0);
  SpectralScalar out = jacobian(model.transform(), psi, q);
  for (auto& z : out.c) z = -z;
  out.at(0, 0) = 0.0;
  return out;
}

}  // namespace

SpectralScalar rhs_vorticity(const Model& model, const SimState& state,
                             const SimParams& params) {
  SpectralScalar out = bracket_tendency(model, state.zeta, params);
  for (int l = 0; l <= state.zeta.L; ++l) {
    const double d = diffusion_symbol(l, params.mu_s, params.a);
    for (int m = 0; m <= l; ++m) out.at(l, m) += d * state.zeta.at(l, m);
  }
  out.at(0, 0) = 0.0;
  return out;
}

VelocityGrid rhs_velocity_oracle(const Model& model, const SimState& state,
                                 const SimParams& params) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  const SpectralScalar psi = stream_of_vorticity(state.zeta);
  const StreamFunction stream(psi);
  const VelocityGrid u = velocity_from_stream(tf, stream);

  const SpectralScalar chi(g.L, g.radius);  // states carry no gradient part
  const TensorGrid gradu = covariant_gradient_potentials(
      tf, model.christoffels(), psi, chi);
  const VelocityGrid adv = advection(g, u, gradu);
  const VelocityGrid visc =
      deformation_divergence(tf, model.christoffels(), stream);

  VelocityGrid F(g.n_phi, g.n_theta);
  for (int j = 0; j < g.n_phi; ++j) {
    const double fc = 2.0 * params.omega * g.cos_phi[j];
    for (int k = 0; k < g.n_theta; ++k) {
      // C u = -f_c K u: components (-f_c u_phi, +f_c u_theta).
      const double cor_t = -fc * u.u_phi.at(j, k);
      const double cor_p = fc * u.u_theta.at(j, k);
      F.u_theta.at(j, k) = -(adv.u_theta.at(j, k) + cor_t -
                             params.mu_s * visc.u_theta.at(j, k));
      F.u_phi.at(j, k) = -(adv.u_phi.at(j, k) + cor_p -
                           params.mu_s * visc.u_phi.at(j, k));
    }
  }
  return project_divergence_free(tf, F);
}

double admissible_dt(const Model& model, const SimState& state) {
  const Grid& g = model.grid();
  const VelocityGrid u = velocity_from_stream(
      model.transform(), StreamFunction(stream_of_vorticity(state.zeta)));
  const double a = g.radius;
  const double dphi = g.min_dphi();
  const double dtheta = g.dtheta();
  double bound = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.n_phi; ++j) {
    const double arc_theta = a * g.sin_phi[j] * dtheta;
    for (int k = 0; k < g.n_theta; ++k) {
      const double ut = std::abs(u.u_theta.at(j, k));
      const double up = std::abs(u.u_phi.at(j, k));
      if (ut > 0.0) bound = std::min(bound, 0.5 * arc_theta / ut);
      if (up > 0.0) bound = std::min(bound, 0.5 * a * dphi / up);
    }
  }
  return bound;
}

void step(const Model& model, SimState& state, const SimParams& params) {
  const double h = params.dt;
  if (!(h > 0.0)) throw InvalidParameterError("step: dt must be > 0");
  const double bound = admissible_dt(model, state);
  if (h > bound * (1.0 + 1e-12))
    throw StepSizeError("step: dt violates the advective stability bound", bound);

  const int L = state.zeta.L;
  std::vector<double> E(L + 1), Eh(L + 1);
  for (int l = 0; l <= L; ++l) {
    const double d = diffusion_symbol(l, params.mu_s, params.a);
    E[l] = std::exp(d * h);
    Eh[l] = std::exp(0.5 * d * h);
  }
  auto scale_modes = [&](const SpectralScalar& s,
                         const std::vector<double>& f) {
    SpectralScalar r = s;
    for (int l = 0; l <= L; ++l)
      for (int m = 0; m <= l; ++m) r.at(l, m) *= f[l];
    return r;
  };
  auto lin = [&](const SpectralScalar& x, double alpha,
                 const SpectralScalar& y) {
    SpectralScalar r = x;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += alpha * y.c[i];
    return r;
  };

  const SpectralScalar& z = state.zeta;
  const SpectralScalar k1 = bracket_tendency(model, z, params);
  const SpectralScalar k2 = bracket_tendency(
      model, scale_modes(lin(z, 0.5 * h, k1), Eh), params);
  const SpectralScalar k3 = bracket_tendency(
      model, lin(scale_modes(z, Eh), 0.5 * h, k2), params);
  const SpectralScalar k4 = bracket_tendency(
      model, lin(scale_modes(z, E), h, scale_modes(k3, Eh)), params);

  SpectralScalar znew = scale_modes(z, E);
  znew = lin(znew, h / 6.0, scale_modes(k1, E));
  znew = lin(znew, h / 3.0, scale_modes(lin(k2, 1.0, k3), Eh));
  znew = lin(znew, h / 6.0, k4);
  znew.at(0, 0) = 0.0;

  state.zeta = std::move(znew);
  state.t += h;
}

void run(const Model& model, SimState& state, const SimParams& params,
         int cadence, const std::function<void(const SimState&)>& observer) {
  if (cadence < 1) throw InvalidParameterError("run: cadence must be >= 1");
  if (params.t_end < 0.0)
    throw InvalidParameterError("run: t_end must be >= 0");
  if (!all_finite(state.zeta))
    throw DivergenceError("run: initial state is not finite", state.t);

  const long n_steps = long(std::floor(params.t_end / params.dt + 1e-9));
  if (observer) observer(state);
  for (long i = 1; i <= n_steps; ++i) {
    const double t_before = state.t;
    step(model, state, params);
    if (!all_finite(state.zeta))
      throw DivergenceError("run: state diverged", t_before);
    if (observer && i % cadence == 0) observer(state);
  }
}

}  // namespace sphereflow
