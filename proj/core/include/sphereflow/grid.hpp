#pragma once

#include <cstddef>
#include <vector>

namespace sphereflow {

// Collocation grid on the radius-a sphere.
//
// Coordinates: longitude theta in [0, 2pi) (index k, uniform), colatitude
// phi in (0, pi) (index j, Gauss-Legendre nodes in cos(phi), no points at
// the poles).  phi = 0 is the north pole.  Metric in (theta, phi) order:
// diag(a^2 sin^2 phi, a^2).
//
// Sizes: n_theta is the smallest even integer >= 3L+5 and
// n_phi = ceil((3L+6)/2).  These exceed the bare 3/2-rule (3L+1) so that
// quadratic products of fields *and of their first/second derivatives*
// analyze without aliasing; the Gauss rule then integrates every polynomial
// integrand of degree <= 2*n_phi - 1 >= 3L+5 exactly.
struct Grid {
  int L = 0;          // spectral truncation the grid was sized for
  double radius = 1;  // sphere radius a
  int n_phi = 0;
  int n_theta = 0;

  std::vector<double> phi;         // colatitude nodes, strictly increasing
  std::vector<double> cos_phi;     // cos(phi_j)
  std::vector<double> sin_phi;     // sin(phi_j), all > 0
  std::vector<double> weight;      // Gauss-Legendre weights on cos(phi); sum = 2
  std::vector<double> theta;       // longitude nodes, theta_k = 2 pi k / n_theta

  std::size_t nodes() const { return std::size_t(n_phi) * n_theta; }
  double dtheta() const { return theta.size() > 1 ? theta[1] - theta[0] : 0.0; }
  // Smallest spacing between adjacent colatitude nodes.
  double min_dphi() const;
};

// Real scalar samples on a Grid, row-major over (j, k) = (phi, theta).
struct GridScalar {
  int n_phi = 0;
  int n_theta = 0;
  std::vector<double> v;

  GridScalar() = default;
  GridScalar(int n_phi, int n_theta)
      : n_phi(n_phi), n_theta(n_theta),
        v(std::size_t(n_phi) * n_theta, 0.0) {}

  double& at(int j, int k) { return v[std::size_t(j) * n_theta + k]; }
  double at(int j, int k) const { return v[std::size_t(j) * n_theta + k]; }
  bool same_shape(const GridScalar& o) const {
    return n_phi == o.n_phi && n_theta == o.n_theta;
  }
};

// Nonzero Christoffel symbols of the round metric, tabulated per colatitude
// node.  Index convention theta <-> 1, phi <-> 2:
//   Gamma^1_{12} = Gamma^1_{21} = cot(phi)   (gamma_ttp)
//   Gamma^2_{11} = -sin(phi) cos(phi)        (gamma_ptt)
// All other symbols vanish; none depend on the radius.
struct ChristoffelTable {
  std::vector<double> gamma_ttp;  // Gamma^theta_{theta phi} at phi_j
  std::vector<double> gamma_ptt;  // Gamma^phi_{theta theta} at phi_j
};

// Builds the grid for truncation L on the radius-a sphere.  Nodes solve
// P_{n_phi}(x) = 0 by Newton iteration polished to |P_n(x_j)| <= 1e-14.
// Throws InvalidParameterError for L < 2 or a <= 0.
Grid build_grid(int L, double a);

ChristoffelTable christoffel_table(const Grid& grid);

// Coriolis parameter f_c(phi) = 2 omega cos(phi) sampled at the grid nodes.
GridScalar coriolis_parameter(const Grid& grid, double omega);

// Quadrature of f over the sphere with the area measure:
// integral f dmu = a^2 (2pi/n_theta) sum_{j,k} w_j f(j,k).
double integrate(const Grid& grid, const GridScalar& f);

}  // namespace sphereflow
