#include "sphereflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphereflow/errors.hpp"

namespace sphereflow {

namespace {

// Legendre polynomial P_n and derivative at x by the three-term recurrence.
void legendre_pn(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

double Grid::min_dphi() const {
  double d = phi.size() > 1 ? phi[1] - phi[0] : 0.0;
  for (std::size_t j = 2; j < phi.size(); ++j)
    d = std::min(d, phi[j] - phi[j - 1]);
  return d;
}

Grid build_grid(int L, double a) {
  if (L < 2) throw InvalidParameterError("build_grid: L must be >= 2");
  if (!(a > 0.0)) throw InvalidParameterError("build_grid: radius must be > 0");

  Grid g;
  g.L = L;
  g.radius = a;
  g.n_theta = 3 * L + 5;
  if (g.n_theta % 2 != 0) ++g.n_theta;
  g.n_phi = (3 * L + 6 + 1) / 2;

  const int n = g.n_phi;
  g.phi.resize(n);
  g.cos_phi.resize(n);
  g.sin_phi.resize(n);
  g.weight.resize(n);

  // Gauss-Legendre nodes: Newton from the Chebyshev-like initial guess.
  // Computed for the upper half and mirrored; x decreasing <-> phi increasing.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_pn(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_pn(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // i = 0 is the node closest to x = +1, i.e. the smallest phi.
    g.cos_phi[i] = x;
    g.weight[i] = w;
    g.cos_phi[n - 1 - i] = -x;
    g.weight[n - 1 - i] = w;
  }
  if (n % 2 == 1) g.cos_phi[n / 2] = 0.0;  // central node is exactly x = 0

  for (int j = 0; j < n; ++j) {
    g.phi[j] = std::acos(g.cos_phi[j]);
    g.sin_phi[j] = std::sqrt((1.0 - g.cos_phi[j]) * (1.0 + g.cos_phi[j]));
  }

  g.theta.resize(g.n_theta);
  for (int k = 0; k < g.n_theta; ++k)
    g.theta[k] = 2.0 * std::numbers::pi * k / g.n_theta;

  return g;
}

ChristoffelTable christoffel_table(const Grid& grid) {
  ChristoffelTable t;
  t.gamma_ttp.resize(grid.n_phi);
  t.gamma_ptt.resize(grid.n_phi);
  for (int j = 0; j < grid.n_phi; ++j) {
    t.gamma_ttp[j] = grid.cos_phi[j] / grid.sin_phi[j];
    t.gamma_ptt[j] = -grid.sin_phi[j] * grid.cos_phi[j];
  }
  return t;
}

GridScalar coriolis_parameter(const Grid& grid, double omega) {
  GridScalar f(grid.n_phi, grid.n_theta);
  for (int j = 0; j < grid.n_phi; ++j) {
    const double fj = 2.0 * omega * grid.cos_phi[j];
    for (int k = 0; k < grid.n_theta; ++k) f.at(j, k) = fj;
  }
  return f;
}

double integrate(const Grid& grid, const GridScalar& f) {
  if (f.n_phi != grid.n_phi || f.n_theta != grid.n_theta)
    throw InvalidParameterError("integrate: field shape does not match grid");
  double total = 0.0;
  for (int j = 0; j < grid.n_phi; ++j) {
    double row = 0.0;
    for (int k = 0; k < grid.n_theta; ++k) row += f.at(j, k);
    total += grid.weight[j] * row;
  }
  const double a = grid.radius;
  return total * a * a * (2.0 * std::numbers::pi / grid.n_theta);
}

}  // namespace sphereflow
