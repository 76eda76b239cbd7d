#pragma once

#include <complex>
#include <vector>

#include "sphereflow/dynamics.hpp"
#include "sphereflow/fields.hpp"

namespace sphereflow {

// One sampled observation of a trajectory.  Norms are over the sphere of
// radius a; energy and enstrophy are the squared L2 norms of u and zeta,
// residual is the (unsquared) L2 distance from the zonal-rotation span.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;       // ||u||^2
  double enstrophy = 0.0;    // ||zeta||^2
  double c_z = 0.0;          // coefficient of the unit rotation about z
  double amp_1m1 = 0.0;      // |psi_{1,-1}|
  double amp_10 = 0.0;       // |psi_{1,0}|
  double amp_1p1 = 0.0;      // |psi_{1,1}|
  double deformation = 0.0;  // ||D_u||^2
  double residual = 0.0;     // ||u - c_z z_z||
  double div_max = 0.0;      // max-norm of the discrete divergence
};

using DiagnosticsSeries = std::vector<DiagnosticsRecord>;

DiagnosticsRecord record(const Model& model, const SimState& state);

// run() with a recording observer sampling every `cadence` steps.
DiagnosticsSeries run_with_diagnostics(const Model& model, SimState& state,
                                       const SimParams& params, int cadence);

struct DecayFit {
  double alpha = 0.0;      // decay rate: values ~ exp(-alpha t)
  double r_squared = 0.0;  // quality of the log-linear fit
};

// Least squares of log(values) against t; alpha is the negated slope.
// A constant series fits exactly: alpha = 0, r_squared = 1.  Throws
// DegenerateFitError on nonpositive values or fewer than two samples.
DecayFit fit_exponential_rate(const std::vector<double>& t,
                              const std::vector<double>& values);

// fit_exponential_rate on the residual column restricted to t in [t1, t2].
DecayFit fit_decay_rate(const DiagnosticsSeries& series, double t1, double t2);

// Trailing-window convenience: fits over the last half of the series.
DecayFit fit_decay_rate(const DiagnosticsSeries& series);

struct PhaseDrift {
  double drift = 0.0;      // (1/m) d arg(coefficient)/dt
  double r_squared = 0.0;
};

// Unwraps arg(coef) along t and fits a line; drift is slope divided by m.
// Requires consecutive phase increments below pi in magnitude to unwrap
// unambiguously.  Throws DegenerateFitError on vanishing coefficients or
// fewer than two samples.
PhaseDrift fit_phase_drift(const std::vector<double>& t,
                           const std::vector<std::complex<double>>& coef,
                           int m);

// Pressure consistent with the momentum balance: solves
//   Laplace(pi) = -div(nabla_u u + Cu - mu_s 2 div D(u))
// in the mean-zero gauge and returns the synthesized field.
GridScalar recover_pressure(const Model& model, const SimState& state,
                            const SimParams& params);

// ||u||^2_{H1} / ||D_u||^2 for fields orthogonal to z_z (relative inner
// product below 1e-10, else PreconditionError).  Returns +infinity when
// ||D_u||^2 <= 1e-14: Killing inputs make the quotient unbounded.
double korn_quotient(const Model& model, const VelocityGrid& u);

}  // namespace sphereflow
