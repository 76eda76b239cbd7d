#include "sphereflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphereflow/errors.hpp"

namespace sphereflow {

namespace {

// L2 norm squared of the velocity with stream function psi (unit-measure
// coefficients): sum of mult_m l(l+1) |psi_lm|^2, radius-independent.
double stream_energy(const SpectralScalar& psi) {
  double e = 0.0;
  for (int l = 1; l <= psi.L; ++l)
    for (int m = 0; m <= l; ++m)
      e += (m == 0 ? 1.0 : 2.0) * double(l) * (l + 1) * std::norm(psi.at(l, m));
  return e;
}

struct LineFit {
  double slope = 0.0;
  double r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const std::size_t n = x.size();
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= double(n);
  ym /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  if (sxx <= 0.0)
    throw DegenerateFitError("least_squares: all abscissae coincide");
  LineFit f;
  f.slope = sxy / sxx;
  if (syy <= 1e-28) {
    f.slope = 0.0;  // constant data: the flat line is an exact fit
    f.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - ym - f.slope * (x[i] - xm);
      ss_res += r * r;
    }
    f.r_squared = 1.0 - ss_res / syy;
  }
  return f;
}

}  // namespace

DiagnosticsRecord record(const Model& model, const SimState& state) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  const double a = g.radius;

  DiagnosticsRecord r;
  r.t = state.t;

  const SpectralScalar psi = stream_of_vorticity(state.zeta);
  r.energy = stream_energy(psi);
  r.enstrophy = a * a * spectral_power(state.zeta);
  r.amp_10 = std::abs(psi.at(1, 0));
  r.amp_1p1 = std::abs(psi.at(1, 1));
  r.amp_1m1 = r.amp_1p1;  // real field: |psi_{1,-1}| = |psi_{1,1}|

  const VelocityGrid u = velocity_from_stream(tf, StreamFunction(psi));
  const ZonalProjection zp = project_onto_zonal(g, model.killing(), u);
  r.c_z = zp.c;

  // Residual spectrally: remove the zonal-rotation stream and sum what is
  // left.  The (1,0) cancellation happens before squaring, so a state near
  // c z_z yields a residual at roundoff rather than sqrt(roundoff).
  SpectralScalar psi_r = psi;
  psi_r.at(1, 0) -= r.c_z * model.killing().psi_z.at(1, 0);
  r.residual = std::sqrt(std::max(0.0, stream_energy(psi_r)));

  r.deformation = deformation_norm_sq(tf, model.christoffels(), u);

  const GridScalar div = tf.synthesize(div_of(tf, u));
  double dmax = 0.0;
  for (double v : div.v) dmax = std::max(dmax, std::abs(v));
  r.div_max = dmax;
  return r;
}

DiagnosticsSeries run_with_diagnostics(const Model& model, SimState& state,
                                       const SimParams& params, int cadence) {
  DiagnosticsSeries series;
  run(model, state, params, cadence,
      [&](const SimState& s) { series.push_back(record(model, s)); });
  return series;
}

DecayFit fit_exponential_rate(const std::vector<double>& t,
                              const std::vector<double>& values) {
  if (t.size() != values.size())
    throw InvalidParameterError("fit_exponential_rate: length mismatch");
  if (t.size() < 2)
    throw DegenerateFitError("fit_exponential_rate: need at least 2 samples");
  std::vector<double> logv(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0))
      throw DegenerateFitError("fit_exponential_rate: nonpositive value");
    logv[i] = std::log(values[i]);
  }
  const LineFit f = least_squares(t, logv);
  return DecayFit{-f.slope, f.r_squared};
}

DecayFit fit_decay_rate(const DiagnosticsSeries& series, double t1,
                        double t2) {
  std::vector<double> t, v;
  for (const auto& r : series)
    if (r.t >= t1 - 1e-12 && r.t <= t2 + 1e-12) {
      t.push_back(r.t);
      v.push_back(r.residual);
    }
  if (t.size() < 2)
    throw DegenerateFitError("fit_decay_rate: fewer than 2 samples in window");
  return fit_exponential_rate(t, v);
}

DecayFit fit_decay_rate(const DiagnosticsSeries& series) {
  if (series.size() < 2)
    throw DegenerateFitError("fit_decay_rate: fewer than 2 samples");
  const double t0 = series.front().t;
  const double t1 = series.back().t;
  return fit_decay_rate(series, 0.5 * (t0 + t1), t1);
}

PhaseDrift fit_phase_drift(const std::vector<double>& t,
                           const std::vector<std::complex<double>>& coef,
                           int m) {
  if (t.size() != coef.size())
    throw InvalidParameterError("fit_phase_drift: length mismatch");
  if (t.size() < 2)
    throw DegenerateFitError("fit_phase_drift: need at least 2 samples");
  if (m == 0) throw InvalidParameterError("fit_phase_drift: m must be nonzero");
  std::vector<double> arg(t.size());
  double offset = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (std::abs(coef[i]) <= 0.0)
      throw DegenerateFitError("fit_phase_drift: vanishing coefficient");
    const double raw = std::arg(coef[i]);
    if (i > 0) {
      double d = raw - prev;
      while (d > std::numbers::pi) {
        d -= 2.0 * std::numbers::pi;
        offset -= 2.0 * std::numbers::pi;
      }
      while (d < -std::numbers::pi) {
        d += 2.0 * std::numbers::pi;
        offset += 2.0 * std::numbers::pi;
      }
    }
    prev = raw;
    arg[i] = raw + offset;
  }
  const LineFit f = least_squares(t, arg);
  return PhaseDrift{f.slope / double(m), f.r_squared};
}

GridScalar recover_pressure(const Model& model, const SimState& state,
                            const SimParams& params) {
  const Transform& tf = model.transform();
  const Grid& g = model.grid();
  const SpectralScalar psi = stream_of_vorticity(state.zeta);
  const StreamFunction stream(psi);
  const VelocityGrid u = velocity_from_stream(tf, stream);

  const SpectralScalar chi(g.L, g.radius);
  const TensorGrid gradu =
      covariant_gradient_potentials(tf, model.christoffels(), psi, chi);
  const VelocityGrid adv = advection(g, u, gradu);
  const VelocityGrid visc =
      deformation_divergence(tf, model.christoffels(), stream);

  VelocityGrid F(g.n_phi, g.n_theta);
  for (int j = 0; j < g.n_phi; ++j) {
    const double fc = 2.0 * params.omega * g.cos_phi[j];
    for (int k = 0; k < g.n_theta; ++k) {
      F.u_theta.at(j, k) = adv.u_theta.at(j, k) - fc * u.u_phi.at(j, k) -
                           params.mu_s * visc.u_theta.at(j, k);
      F.u_phi.at(j, k) = adv.u_phi.at(j, k) + fc * u.u_theta.at(j, k) -
                         params.mu_s * visc.u_phi.at(j, k);
    }
  }
  SpectralScalar d = div_of(tf, F);
  d.at(0, 0) = 0.0;  // the divergence integrates to zero; drop roundoff
  SpectralScalar p = invert_laplacian(d);
  for (auto& z : p.c) z = -z;
  return tf.synthesize(p);
}

double korn_quotient(const Model& model, const VelocityGrid& u) {
  const Grid& g = model.grid();
  const KillingBasis& kb = model.killing();
  const double uu = inner_product(g, u, u);
  const double uz = inner_product(g, u, kb.zz);
  if (std::abs(uz) > 1e-10 * std::max(1.0, std::sqrt(uu * kb.norm_sq)))
    throw PreconditionError("korn_quotient: input not orthogonal to z_z");
  const double dsq = deformation_norm_sq(model.transform(),
                                         model.christoffels(), u);
  if (dsq <= 1e-14) return std::numeric_limits<double>::infinity();
  const double h1 = uu + grad_norm_sq(model.transform(),
                                      model.christoffels(), u);
  return h1 / dsq;
}

}  // namespace sphereflow
