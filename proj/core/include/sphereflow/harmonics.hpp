#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "sphereflow/grid.hpp"

namespace sphereflow {

// Spherical-harmonic coefficients of a real scalar, orthonormal basis with
// Condon-Shortley phase, unit-sphere measure: analyze(1) has sqrt(4pi) at
// (0,0).  Only m >= 0 is stored; m < 0 follows from the real-field symmetry
// a_{l,-m} = (-1)^m conj(a_{l,m}).
struct SpectralScalar {
  int L = 0;
  double radius = 1.0;
  std::vector<std::complex<double>> c;  // triangular (l,m), m <= l

  SpectralScalar() = default;
  SpectralScalar(int L, double radius)
      : L(L), radius(radius), c(std::size_t(L + 1) * (L + 2) / 2) {}

  static std::size_t index(int l, int m) {
    return std::size_t(l) * (l + 1) / 2 + m;
  }
  std::complex<double>& at(int l, int m) { return c[index(l, m)]; }
  std::complex<double> at(int l, int m) const { return c[index(l, m)]; }
};

// Partial theta/phi derivatives of a synthesized scalar: d[alpha][beta] holds
// d^alpha/dtheta^alpha d^beta/dphi^beta for alpha + beta <= order.
struct JetTable {
  int order = 0;
  std::array<std::array<GridScalar, 4>, 4> d;
};

// Analysis/synthesis engine.  Owns the grid plus tables of the fully
// normalized associated Legendre functions lambda_l^m(cos phi) (so that
// Y_lm = lambda_l^m e^{i m theta}), their colatitude derivatives
// V = d lambda/dphi, the ratios W = m lambda / sin(phi), and cos/sin(m theta).
//
// lambda is built by the stable (l-1, l-2) recurrence seeded at l = m; the
// derivative tables follow from sin(phi) lambda' relations, and second/third
// phi-derivatives (for jets) from the associated Legendre ODE, so no finite
// differences appear anywhere.
class Transform {
 public:
  explicit Transform(Grid grid);

  const Grid& grid() const { return grid_; }
  int L() const { return grid_.L; }

  // a_lm = (1/a^2) integral h conj(Y_lm) dmu; exact for band-limited h.
  SpectralScalar analyze(const GridScalar& h) const;

  // h(j,k) = sum_lm a_lm Y_lm, real combination over stored m >= 0.
  GridScalar synthesize(const SpectralScalar& s) const;

  // d/dphi of the synthesis.
  GridScalar synthesize_dphi(const SpectralScalar& s) const;

  // (1/sin phi) d/dtheta of the synthesis; finite at every node.
  GridScalar synthesize_dtheta_over_sin(const SpectralScalar& s) const;

  // Full derivative jet up to `order` (<= 3).
  JetTable jet(const SpectralScalar& s, int order) const;

  // Quadrature analysis of tangent-field data against the vector-harmonic
  // component tables: returns r with
  //   r_lm = (1/a) * ( <fV, V_lm e^{-im theta}> + i <fW, W_lm e^{-im theta}> )
  // where <.,.> is the spherical quadrature.  The curl and divergence of a
  // velocity with physical components (ut, up) are
  //   rot = vector_analysis(ut, up),  div = vector_analysis(-up, ut).
  SpectralScalar vector_analysis(const GridScalar& fV,
                                 const GridScalar& fW) const;

  // Direct node evaluation of lambda_l^m along the colatitude column.
  // Exposed for oracle tests; synthesis does not use it.
  double lambda(int l, int m, int j) const {
    return lam_[m][std::size_t(j) * (grid_.L + 1 - m) + (l - m)];
  }
  double dlambda(int l, int m, int j) const {
    return dlam_[m][std::size_t(j) * (grid_.L + 1 - m) + (l - m)];
  }

 private:
  // Fourier coefficients of h along each latitude row, m = 0..L.
  std::vector<std::complex<double>> fourier_rows(const GridScalar& h) const;

  Grid grid_;
  // Per m: row-major [j][l-m] tables, j = 0..n_phi-1, l = m..L.
  std::vector<std::vector<double>> lam_;   // lambda_l^m(x_j)
  std::vector<std::vector<double>> dlam_;  // d lambda/dphi at x_j
  std::vector<std::vector<double>> cosm_;  // cos(m theta_k)
  std::vector<std::vector<double>> sinm_;  // sin(m theta_k)
};

// Coefficientwise Laplace-Beltrami symbol: (l,m) -> -l(l+1)/a^2 * coeff.
SpectralScalar laplacian(const SpectralScalar& s);

// Inverse on mean-zero input: divides by -l(l+1)/a^2 for l >= 1 and keeps
// (0,0) at zero.  Throws GaugeError (carrying the magnitude) if |(0,0)| > 1e-10.
SpectralScalar invert_laplacian(const SpectralScalar& s);

// sum over modes of mult_m |a_lm|^2 (mult 2 for m > 0): equals
// (1/a^2) integral h^2 dmu for the synthesized field.
double spectral_power(const SpectralScalar& s);

}  // namespace sphereflow
