// End-to-end acceptance battery: nine checks tying the solver to its
// structural identities and to closed-form linear-regime behavior.  Each
// check prints one [PASS]/[FAIL] line with its measured numbers; the exit
// code is the count of failures.

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "sphereflow/diagnostics.hpp"
#include "sphereflow/dynamics.hpp"
#include "sphereflow/errors.hpp"
#include "sphereflow/verification.hpp"

using namespace sphereflow;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d %-26s %s\n", ok ? "PASS" : "FAIL", idx, name,
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double max_coeff(const SpectralScalar& s) {
  double m = 0.0;
  for (const auto& c : s.c) m = std::max(m, std::abs(c));
  return m;
}

double coefficient_norm(const SpectralScalar& s) {
  return std::sqrt(spectral_power(s));
}

SimState equilibrium_state(const Model& model, double c) {
  SimState s;
  SpectralScalar psi = model.killing().psi_z;
  for (auto& z : psi.c) z *= c;
  s.zeta = vorticity_from_stream(StreamFunction(psi));
  return s;
}

SimState tilted_state(const Model& model) {
  SimState s;
  s.zeta = vorticity_from_stream(StreamFunction(model.killing().psi_x));
  return s;
}

VelocityGrid velocity_of(const Model& model, const SpectralScalar& zeta) {
  return velocity_from_stream(model.transform(),
                              StreamFunction(stream_of_vorticity(zeta)));
}

// Random vorticity spread over degrees [lmin, lmax], rescaled so the induced
// flow has the requested maximum speed and respects the advective bound for
// the given dt.
SimState random_state(const Model& model, int lmin, int lmax, unsigned seed,
                      double target_speed, double dt) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int L = model.grid().L;
  SimState s;
  s.zeta = SpectralScalar(L, model.grid().radius);
  for (int l = lmin; l <= lmax; ++l) {
    const double w = std::pow(double(l), -2.0);
    for (int m = 0; m <= l; ++m) {
      const double re = w * dist(rng);
      const double im = m == 0 ? 0.0 : w * dist(rng);
      s.zeta.at(l, m) = {re, im};
    }
  }
  double speed = max_speed(velocity_of(model, s.zeta));
  for (auto& c : s.zeta.c) c *= target_speed / speed;
  while (admissible_dt(model, s) <= 1.05 * dt)
    for (auto& c : s.zeta.c) c *= 0.8;
  return s;
}

void criterion_1_identity_suite() {
  const auto reports = run_identity_suite(15, 1.0, 7);
  bool ok = reports.size() == 9;
  double worst = 0.0;
  for (const auto& r : reports) {
    ok = ok && r.pass;
    worst = std::max(worst, r.max_error);
  }
  report(1, "identity-suite", ok,
         "9 checks, worst error " + fmt(worst) + " (tol 1e-8/1e-6)");
}

void criterion_2_equilibrium(const Model& model) {
  SimParams params;
  params.a = 1.0;
  params.omega = 1.0;
  params.mu_s = 0.01;
  params.dt = 1e-2;
  params.t_end = 10.0;
  SimState state = equilibrium_state(model, 1.0);
  const SpectralScalar init = state.zeta;
  run(model, state, params, 1 << 30, [](const SimState&) {});

  double drift = 0.0;
  for (std::size_t i = 0; i < init.c.size(); ++i)
    drift = std::max(drift, std::abs(state.zeta.c[i] - init.c[i]));
  drift /= max_coeff(init);

  const GridScalar p = recover_pressure(model, state, params);
  const Grid& g = model.grid();
  double perr = 0.0;
  for (int j = 0; j < g.n_phi; ++j) {
    const double cp = g.cos_phi[j];
    const double expected = 0.5 * (1.0 + cp * cp) - 2.0 / 3.0;
    for (int k = 0; k < g.n_theta; ++k)
      perr = std::max(perr, std::abs(p.at(j, k) - expected));
  }

  report(2, "equilibrium-stationarity", drift <= 1e-6 && perr <= 1e-6,
         "zeta drift " + fmt(drift) + " (tol 1e-6), pressure error " +
             fmt(perr) + " (tol 1e-6)");
}

void criterion_3_kernel(const Model& model) {
  bool symbol_ok = true;
  for (double mu : {0.01, 0.5, 3.0})
    for (double a : {0.5, 1.0, 2.0})
      symbol_ok = symbol_ok && diffusion_symbol(1, mu, a) == 0.0;

  SimParams params;
  params.omega = 1.0;
  params.mu_s = 0.01;
  const double zonal_tendency =
      max_speed(rhs_velocity_oracle(model, equilibrium_state(model, 1.0), params));

  SimParams coriolis_only;
  coriolis_only.omega = 1.0;
  coriolis_only.mu_s = 0.0;
  const double tilted_tendency =
      max_speed(rhs_velocity_oracle(model, tilted_state(model), coriolis_only));

  const bool ok =
      symbol_ok && zonal_tendency <= 1e-8 && tilted_tendency > 1e-6;
  report(3, "kernel-structure", ok,
         "d_1 = 0 exact, zonal tendency " + fmt(zonal_tendency) +
             " (tol 1e-8), tilted tendency " + fmt(tilted_tendency) +
             " (must be nonzero)");
}

void criteria_4_5_conservation_and_energy_law(const Model& model) {
  SimParams params;
  params.omega = 1.0;
  params.mu_s = 0.05;
  // dt sets the centered-difference spacing below; the defect scales with
  // (rate * dt)^2 and the fastest resolved decay rate is ~2 mu_s l(l+1).
  params.dt = 0.005;
  params.t_end = 40.0;
  SimState state = random_state(model, 1, 5, 2026, 0.3, params.dt);

  const DiagnosticsSeries series = run_with_diagnostics(model, state, params, 1);

  // Zonal projection stays put.
  const double u0 = std::sqrt(series.front().energy);
  double c_drift = 0.0;
  for (const auto& r : series)
    c_drift = std::max(c_drift, std::abs(r.c_z - series.front().c_z));
  report(4, "zonal-conservation", c_drift <= 1e-5 * u0,
         "max |c_z(t) - c_z(0)| = " + fmt(c_drift) + " (tol " +
             fmt(1e-5 * u0) + ")");

  // Centered-difference energy balance at every interior sample, and a
  // monotone residual.
  const double dt = params.dt;
  double worst_rel = 0.0;
  bool monotone = true;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    const double lhs = (series[i + 1].residual * series[i + 1].residual -
                        series[i - 1].residual * series[i - 1].residual) /
                       (2.0 * dt);
    const double rhs = -4.0 * params.mu_s * series[i].deformation;
    worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / std::abs(rhs));
  }
  for (std::size_t i = 1; i < series.size(); ++i)
    monotone = monotone && series[i].residual <= series[i - 1].residual + 1e-10;
  report(5, "energy-balance", worst_rel <= 1e-3 && monotone,
         "worst relative defect " + fmt(worst_rel) +
             " (tol 1e-3), residual monotone: " + (monotone ? "yes" : "no"));
}

void criterion_6_linear_decay(const Model& model) {
  struct ModeCase {
    int l, m;
  };
  bool ok = true;
  std::string detail;
  for (const ModeCase mc : {ModeCase{2, 0}, ModeCase{3, 2}, ModeCase{5, 3}}) {
    SimParams params;
    params.omega = 1.0;
    params.mu_s = 0.01;
    params.dt = 0.01;
    params.t_end = 10.0;
    SimState state;
    state.zeta = SpectralScalar(model.grid().L, model.grid().radius);
    state.zeta.at(mc.l, mc.m) = 1e-4;
    const DiagnosticsSeries series =
        run_with_diagnostics(model, state, params, 10);
    const DecayFit fit = fit_decay_rate(series);
    const double predicted = params.mu_s * (mc.l * (mc.l + 1) - 2);
    ok = ok && std::abs(fit.alpha - predicted) <= 0.05 * predicted;
    if (!detail.empty()) detail += ", ";
    detail += "(" + std::to_string(mc.l) + "," + std::to_string(mc.m) +
              ") " + fmt(fit.alpha) + " vs " + fmt(predicted);
  }
  report(6, "linear-decay-rates", ok, detail + " (tol 5%)");
}

void criterion_7_rossby(const Model& model) {
  auto drift_of = [&](int l, int m, double omega) {
    SimParams params;
    params.omega = omega;
    params.mu_s = 0.0;
    params.dt = 0.01;
    SimState state;
    state.zeta = SpectralScalar(model.grid().L, model.grid().radius);
    state.zeta.at(l, m) = 1e-6;
    std::vector<double> times{state.t};
    std::vector<std::complex<double>> coef{state.zeta.at(l, m)};
    for (int i = 0; i < 200; ++i) {
      step(model, state, params);
      times.push_back(state.t);
      coef.push_back(state.zeta.at(l, m));
    }
    return fit_phase_drift(times, coef, m).drift;
  };

  const double d21 = drift_of(2, 1, 1.0);
  const double d11 = drift_of(1, 1, 1.0);
  const bool ok21 = std::abs(d21 - (-1.0 / 3.0)) <= 0.01 / 3.0;
  const bool ok11 = std::abs(d11 - (-1.0)) <= 0.01;
  report(7, "rossby-precession", ok21 && ok11,
         "(2,1) " + fmt(d21) + " vs -1/3, (1,1) " + fmt(d11) +
             " vs -1 (tol 1%)");
}

void criterion_8_convergence(const Model& model) {
  SimParams params;
  params.omega = 1.0;
  params.mu_s = 0.1;
  params.dt = 0.01;
  params.t_end = 100.0;

  // Energy across degrees 2..5 plus an explicit zonal component; the l = 1
  // tilt is seeded four orders below everything else so the trajectory's
  // approach to a pure rotation is measurable while the tilt subspace, which
  // carries no deformation, is still traced.
  SimState state = random_state(model, 2, 5, 11, 0.25, params.dt);
  state.zeta.at(1, 0) = 0.1;
  const double u0 = std::sqrt(record(model, state).energy);
  const double tilt_psi = 0.5e-4 * u0;
  state.zeta.at(1, 1) = std::complex<double>(0.6, 0.8) * (2.0 * tilt_psi);
  while (admissible_dt(model, state) <= 1.05 * params.dt)
    for (auto& c : state.zeta.c) c *= 0.8;

  const DiagnosticsSeries series = run_with_diagnostics(model, state, params, 10);
  const DiagnosticsRecord& first = series.front();
  const DiagnosticsRecord& last = series.back();

  const bool residual_ok = last.residual <= 1e-3 * first.residual;
  const bool c_ok = std::abs(last.c_z - first.c_z) <= 1e-4;
  report(8, "convergence-to-rotation", residual_ok && c_ok,
         "residual " + fmt(first.residual) + " -> " + fmt(last.residual) +
             " (tol 1e-3 rel), |c_z drift| = " + fmt(std::abs(last.c_z - first.c_z)) +
             " (tol 1e-4)");

  // Deliverable, not a bound: the tilt modes sit in the kernel of the
  // deformation operator, so their amplitude history and end-window rate
  // document how the trajectory behaves inside that subspace.
  std::string history = "        l=1 tilt |psi_11|:";
  for (double tq : {0.0, 25.0, 50.0, 75.0, 100.0}) {
    const std::size_t i =
        std::min(series.size() - 1, std::size_t(tq / (params.dt * 10)));
    history += " t=" + fmt(series[i].t) + " " + fmt(series[i].amp_1p1);
  }
  std::printf("%s\n", history.c_str());
  std::vector<double> ts, amps;
  for (const auto& r : series)
    if (r.t >= 50.0) {
      ts.push_back(r.t);
      amps.push_back(r.amp_1p1);
    }
  try {
    const DecayFit tilt_fit = fit_exponential_rate(ts, amps);
    std::printf("        l=1 end-window decay rate %s (r^2 = %.6f);"
                " no bound asserted\n",
                fmt(tilt_fit.alpha).c_str(), tilt_fit.r_squared);
  } catch (const DegenerateFitError&) {
    std::printf("        l=1 end-window decay rate: degenerate fit\n");
  }
}

void criterion_9_tendency_equivalence(const Model& model) {
  SimParams params;
  params.omega = 1.0;
  params.mu_s = 0.01;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int L = model.grid().L;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SimState state;
    state.zeta = SpectralScalar(L, model.grid().radius);
    for (int l = 1; l <= L / 2; ++l) {
      const double w = 1.0 / (1.0 + l);
      for (int m = 0; m <= l; ++m) {
        const double re = w * dist(rng);
        const double im = m == 0 ? 0.0 : w * dist(rng);
        state.zeta.at(l, m) = {re, im};
      }
    }
    const double speed = max_speed(velocity_of(model, state.zeta));
    for (auto& c : state.zeta.c) c *= 0.5 / speed;

    const SpectralScalar direct = rhs_vorticity(model, state, params);
    const SpectralScalar via_velocity =
        rot_of(model.transform(), rhs_velocity_oracle(model, state, params));
    SpectralScalar diff = direct;
    for (std::size_t i = 0; i < diff.c.size(); ++i)
      diff.c[i] -= via_velocity.c[i];
    worst = std::max(worst,
                     coefficient_norm(diff) / coefficient_norm(direct));
  }
  report(9, "tendency-equivalence", worst <= 1e-8,
         "20 states, worst relative error " + fmt(worst) + " (tol 1e-8)");
}

}  // namespace

int main() {
  const Model model(15, 1.0);
  criterion_1_identity_suite();
  criterion_2_equilibrium(model);
  criterion_3_kernel(model);
  criteria_4_5_conservation_and_energy_law(model);
  criterion_6_linear_decay(model);
  criterion_7_rossby(model);
  criterion_8_convergence(model);
  criterion_9_tendency_equivalence(model);
  if (g_failures == 0)
    std::printf("all acceptance criteria satisfied\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
