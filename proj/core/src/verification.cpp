#include "sphereflow/verification.hpp"

#include <cmath>
#include <random>

#include "sphereflow/diagnostics.hpp"
#include "sphereflow/errors.hpp"

namespace sphereflow {

namespace {

constexpr int kTrials = 20;

double l2norm(const Grid& g, const VelocityGrid& u) {
  return std::sqrt(std::max(0.0, inner_product(g, u, u)));
}

double scalar_l2norm(double a, const SpectralScalar& s) {
  return a * std::sqrt(spectral_power(s));
}

VelocityGrid sub(const VelocityGrid& u, const VelocityGrid& v) {
  return axpy(-1.0, v, u);
}

// Random mean-zero scalar band-limited to lmax; m = 0 rows stay real so the
// coefficients describe a real field.
SpectralScalar random_scalar(std::mt19937& rng, int L, double a, int lmax) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SpectralScalar s(L, a);
  for (int l = 1; l <= lmax; ++l) {
    const double w = 1.0 / (1.0 + l);
    for (int m = 0; m <= l; ++m) {
      const double re = w * dist(rng);
      const double im = m == 0 ? 0.0 : w * dist(rng);
      s.at(l, m) = {re, im};
    }
  }
  return s;
}

VelocityGrid random_velocity(std::mt19937& rng, const Model& model, int lmax) {
  const Grid& g = model.grid();
  const SpectralScalar psi = random_scalar(rng, g.L, g.radius, lmax);
  const SpectralScalar chi = random_scalar(rng, g.L, g.radius, lmax);
  return axpy(1.0, velocity_from_stream(model.transform(), StreamFunction(psi)),
              gradient_field(model.transform(), chi));
}

IdentityReport check_k_algebra(const Model& model, std::mt19937& rng,
                               int lmax, double tol) {
  const Grid& g = model.grid();
  double worst = 0.0;
  for (int k = 0; k < kTrials; ++k) {
    const VelocityGrid u = random_velocity(rng, model, lmax);
    const VelocityGrid v = random_velocity(rng, model, lmax);
    const double nu = l2norm(g, u), nv = l2norm(g, v);
    const VelocityGrid kk = apply_K(apply_K(u));
    double e = max_speed(axpy(1.0, kk, u)) / std::max(1e-300, max_speed(u));
    e = std::max(e, std::abs(inner_product(g, apply_K(u), u)) /
                        std::max(1e-300, nu * nu));
    e = std::max(e, std::abs(inner_product(g, apply_K(u), v) +
                             inner_product(g, u, apply_K(v))) /
                        std::max(1e-300, nu * nv));
    worst = std::max(worst, e);
  }
  return {"K-algebra", worst, kTrials, tol, worst <= tol};
}

IdentityReport check_rot_grad(const Model& model, std::mt19937& rng,
                              int lmax, double tol) {
  const Grid& g = model.grid();
  double worst = 0.0;
  for (int k = 0; k < kTrials; ++k) {
    const SpectralScalar h = random_scalar(rng, g.L, g.radius, lmax);
    const VelocityGrid u = gradient_field(model.transform(), h);
    const double e = g.radius * scalar_l2norm(1.0, rot_of(model.transform(), u)) /
                     std::max(1e-300, l2norm(g, u));
    worst = std::max(worst, e);
  }
  return {"rot-grad", worst, kTrials, tol, worst <= tol};
}

IdentityReport check_divergence_theorem(const Model& model, std::mt19937& rng,
                                        int lmax, double tol) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  double worst = 0.0;
  for (int k = 0; k < kTrials; ++k) {
    // (a): (div u, h) = -(u | grad h).
    const SpectralScalar h = random_scalar(rng, g.L, g.radius, lmax);
    const VelocityGrid u = random_velocity(rng, model, lmax);
    const GridScalar hg = tf.synthesize(h);
    GridScalar div_u = tf.synthesize(div_of(tf, u));
    for (std::size_t i = 0; i < div_u.v.size(); ++i) div_u.v[i] *= hg.v[i];
    const VelocityGrid gh = gradient_field(tf, h);
    const double lhs_a = integrate(g, div_u);
    const double rhs_a = -inner_product(g, u, gh);
    const double scale_a = std::max(1e-300, l2norm(g, u) * l2norm(g, gh));
    worst = std::max(worst, std::abs(lhs_a - rhs_a) / scale_a);

    // (b)(ii): (div(u (x) v) | w) = -(u | grad_v w).
    const VelocityGrid v = random_velocity(rng, model, lmax);
    const VelocityGrid w = random_velocity(rng, model, lmax);
    const GridScalar div_v = tf.synthesize(div_of(tf, v));
    VelocityGrid lhs_field =
        advection(g, v, covariant_gradient(tf, model.christoffels(), u));
    for (std::size_t i = 0; i < div_v.v.size(); ++i) {
      lhs_field.u_theta.v[i] += div_v.v[i] * u.u_theta.v[i];
      lhs_field.u_phi.v[i] += div_v.v[i] * u.u_phi.v[i];
    }
    const double lhs_b = inner_product(g, lhs_field, w);
    const double rhs_b = -inner_product(
        g, u, advection(g, v, covariant_gradient(tf, model.christoffels(), w)));
    const double scale_b = std::max(
        1e-300,
        l2norm(g, u) * l2norm(g, w) * max_speed(v) / g.radius);
    worst = std::max(worst, std::abs(lhs_b - rhs_b) / scale_b);
  }
  return {"divergence-theorem", worst, kTrials, tol, worst <= tol};
}

IdentityReport check_deformation_pairing(const Model& model, std::mt19937& rng,
                                         int lmax, double tol) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  const ChristoffelTable& ch = model.christoffels();
  double worst = 0.0;
  for (int k = 0; k < kTrials; ++k) {
    const SpectralScalar pu = random_scalar(rng, g.L, g.radius, lmax);
    const SpectralScalar pv = random_scalar(rng, g.L, g.radius, lmax);
    const StreamFunction su(pu);
    const VelocityGrid u = velocity_from_stream(tf, su);
    const VelocityGrid v = velocity_from_stream(tf, StreamFunction(pv));
    const double lhs = inner_product(g, deformation_divergence(tf, ch, su), v);
    // Polarization: (D_u|D_v) = (||D_{u+v}||^2 - ||D_{u-v}||^2) / 4.
    const double duv = deformation_norm_sq(tf, ch, axpy(1.0, u, v)) -
                       deformation_norm_sq(tf, ch, sub(v, u));
    const double rhs = -0.5 * duv;
    const double scale = std::max(1e-300, deformation_norm_sq(tf, ch, u) +
                                              deformation_norm_sq(tf, ch, v));
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return {"deformation-pairing", worst, kTrials, tol, worst <= tol};
}

IdentityReport check_killing_fields(const Model& model, double tol) {
  const Transform& tf = model.transform();
  const ChristoffelTable& ch = model.christoffels();
  double worst = 0.0;
  for (const VelocityGrid* z :
       {&model.killing().zx, &model.killing().zy, &model.killing().zz}) {
    const double d = deformation_norm_sq(tf, ch, *z);
    const double n = grad_norm_sq(tf, ch, *z);
    worst = std::max(worst, std::sqrt(std::max(0.0, d) / n));
  }
  return {"killing-fields", worst, 3, tol, worst <= tol};
}

IdentityReport check_coriolis_potential(const Model& model, std::mt19937& rng,
                                        double tol) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  double worst = 0.0;
  for (int k = 0; k < kTrials; ++k) {
    const double c = dist(rng);
    const double omega = dist(rng);
    // C(c z_z) pointwise: the zonal rotation has no colatitude component.
    VelocityGrid cu(g.n_phi, g.n_theta);
    for (int j = 0; j < g.n_phi; ++j) {
      const double fc = 2.0 * omega * g.cos_phi[j];
      for (int kk = 0; kk < g.n_theta; ++kk) {
        cu.u_theta.at(j, kk) = -fc * model.killing().zz.u_phi.at(j, kk) * c;
        cu.u_phi.at(j, kk) = fc * model.killing().zz.u_theta.at(j, kk) * c;
      }
    }
    GridScalar hstar(g.n_phi, g.n_theta);
    const double a2 = g.radius * g.radius;
    for (int j = 0; j < g.n_phi; ++j)
      for (int kk = 0; kk < g.n_theta; ++kk)
        hstar.at(j, kk) = -a2 * c * omega * g.cos_phi[j] * g.cos_phi[j];
    const VelocityGrid gh = gradient_field(tf, tf.analyze(hstar));
    worst = std::max(worst, l2norm(g, sub(cu, gh)) /
                                std::max(1e-300, l2norm(g, cu)));
  }
  return {"coriolis-potential", worst, kTrials, tol, worst <= tol};
}

IdentityReport check_helmholtz(const Model& model, std::mt19937& rng,
                               int lmax, double tol) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  double worst = 0.0;
  for (int k = 0; k < kTrials; ++k) {
    const VelocityGrid u = random_velocity(rng, model, lmax);
    const VelocityGrid v = random_velocity(rng, model, lmax);
    const double nu = l2norm(g, u), nv = l2norm(g, v);
    const HelmholtzParts parts = helmholtz_decompose(tf, u);
    const VelocityGrid recon =
        axpy(1.0, velocity_from_stream(tf, StreamFunction(parts.psi)),
             gradient_field(tf, parts.chi));
    double e = l2norm(g, sub(recon, u)) / std::max(1e-300, nu);
    const VelocityGrid pu = project_divergence_free(tf, u);
    const VelocityGrid pv = project_divergence_free(tf, v);
    e = std::max(e, l2norm(g, sub(project_divergence_free(tf, pu), pu)) /
                        std::max(1e-300, nu));
    e = std::max(e, std::abs(inner_product(g, pu, v) -
                             inner_product(g, u, pv)) /
                        std::max(1e-300, nu * nv));
    worst = std::max(worst, e);
  }
  return {"helmholtz", worst, kTrials, tol, worst <= tol};
}

IdentityReport check_killing_grad(const Model& model, double tol) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  const ChristoffelTable& ch = model.christoffels();
  const VelocityGrid* zs[3] = {&model.killing().zx, &model.killing().zy,
                               &model.killing().zz};
  double worst = 0.0;
  for (const VelocityGrid* zi : zs)
    for (const VelocityGrid* zj : zs) {
      const VelocityGrid lhs =
          axpy(1.0, advection(g, *zi, covariant_gradient(tf, ch, *zj)),
               advection(g, *zj, covariant_gradient(tf, ch, *zi)));
      VelocityGrid rhs =
          gradient_field(tf, tf.analyze(pointwise_dot(*zi, *zj)));
      for (auto& x : rhs.u_theta.v) x = -x;
      for (auto& x : rhs.u_phi.v) x = -x;
      const double scale = std::max(
          1e-300, max_speed(*zi) * max_speed(*zj) / g.radius *
                      std::sqrt(4.0 * std::numbers::pi) * g.radius);
      worst = std::max(worst, l2norm(g, sub(lhs, rhs)) / scale);
    }
  return {"killing-grad", worst, 9, tol, worst <= tol};
}

IdentityReport check_equilibrium_oracle(const Model& model, std::mt19937& rng,
                                        double tol) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  const ChristoffelTable& ch = model.christoffels();
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  double worst = 0.0;
  for (int k = 0; k < kTrials; ++k) {
    const double c = dist(rng);
    SimParams params;
    params.a = g.radius;
    params.omega = dist(rng);
    params.mu_s = 0.25 * dist(rng);

    SpectralScalar psi = model.killing().psi_z;
    for (auto& z : psi.c) z *= c;
    const StreamFunction stream(psi);
    SimState state{0.0, vorticity_from_stream(stream)};
    const VelocityGrid F = rhs_velocity_oracle(model, state, params);

    const VelocityGrid u = velocity_from_stream(tf, stream);
    const VelocityGrid adv =
        advection(g, u, covariant_gradient(tf, ch, u));
    VelocityGrid cor = apply_K(u);
    for (int j = 0; j < g.n_phi; ++j) {
      const double fc = -2.0 * params.omega * g.cos_phi[j];
      for (int kk = 0; kk < g.n_theta; ++kk) {
        cor.u_theta.at(j, kk) *= fc;
        cor.u_phi.at(j, kk) *= fc;
      }
    }
    const VelocityGrid visc = deformation_divergence(tf, ch, stream);
    const double scale = l2norm(g, adv) + l2norm(g, cor) +
                         params.mu_s * l2norm(g, visc) + 1e-300;
    worst = std::max(worst, l2norm(g, F) / scale);
  }
  return {"equilibrium-oracle", worst, kTrials, tol, worst <= tol};
}

}  // namespace

std::vector<IdentityReport> run_identity_suite(int L, double a,
                                               unsigned seed) {
  if (L < 4)
    throw InvalidParameterError("run_identity_suite: L must be at least 4");
  const Model model(L, a);
  std::mt19937 rng(seed);
  const int lmax = L / 2;
  const double base = L >= 8 ? 1e-8 : 1e-6;
  const double deep = L >= 8 ? 1e-6 : 1e-4;  // second/third-derivative routes

  std::vector<IdentityReport> reports;
  reports.push_back(check_k_algebra(model, rng, lmax, base));
  reports.push_back(check_rot_grad(model, rng, lmax, base));
  reports.push_back(check_divergence_theorem(model, rng, lmax, base));
  reports.push_back(check_deformation_pairing(model, rng, lmax, deep));
  reports.push_back(check_killing_fields(model, base));
  reports.push_back(check_coriolis_potential(model, rng, base));
  reports.push_back(check_helmholtz(model, rng, lmax, base));
  reports.push_back(check_killing_grad(model, base));
  reports.push_back(check_equilibrium_oracle(model, rng, deep));
  return reports;
}

}  // namespace sphereflow
