#include "sphereflow/harmonics.hpp"

#include <cmath>
#include <numbers>

#include "sphereflow/errors.hpp"

namespace sphereflow {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_shape(const Grid& g, const GridScalar& h, const char* who) {
  if (h.n_phi != g.n_phi || h.n_theta != g.n_theta)
    throw InvalidParameterError(std::string(who) + ": field shape does not match grid");
}
}  // namespace

Transform::Transform(Grid grid) : grid_(std::move(grid)) {
  const int L = grid_.L;
  const int np = grid_.n_phi;

  lam_.resize(L + 1);
  dlam_.resize(L + 1);
  for (int m = 0; m <= L; ++m) {
    lam_[m].assign(std::size_t(np) * (L + 1 - m), 0.0);
    dlam_[m].assign(std::size_t(np) * (L + 1 - m), 0.0);
  }

  // Column-by-column recurrence in l at fixed (m, node).
  for (int j = 0; j < np; ++j) {
    const double x = grid_.cos_phi[j];
    const double s = grid_.sin_phi[j];
    const double omx2 = (1.0 - x) * (1.0 + x);
    for (int m = 0; m <= L; ++m) {
      const std::size_t row = std::size_t(j) * (L + 1 - m);
      double* lam = &lam_[m][row];

      // Seed lambda_m^m with the Condon-Shortley sign.
      double pmm = 1.0;
      double fact = 1.0;
      for (int i = 1; i <= m; ++i) {
        pmm *= omx2 * fact / (fact + 1.0);
        fact += 2.0;
      }
      pmm = std::sqrt((2.0 * m + 1.0) * pmm / kFourPi);
      if (m & 1) pmm = -pmm;
      lam[0] = pmm;
      if (m + 1 <= L) lam[1] = x * std::sqrt(2.0 * m + 3.0) * pmm;
      double oldfact = std::sqrt(2.0 * m + 3.0);
      for (int l = m + 2; l <= L; ++l) {
        const double f =
            std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        lam[l - m] = (x * lam[l - m - 1] - lam[l - m - 2] / oldfact) * f;
        oldfact = f;
      }

      // d lambda/dphi = (l x lambda_l - c_lm lambda_{l-1}) / sin(phi),
      // c_lm = sqrt((l^2 - m^2)(2l+1)/(2l-1)).
      double* dl = &dlam_[m][row];
      for (int l = m; l <= L; ++l) {
        const double below = (l > m) ? lam[l - m - 1] : 0.0;
        const double clm = std::sqrt((double(l) * l - double(m) * m) *
                                     (2.0 * l + 1.0) / (2.0 * l - 1.0));
        dl[l - m] = (l * x * lam[l - m] - clm * below) / s;
      }
    }
  }

  const int nt = grid_.n_theta;
  cosm_.resize(L + 1);
  sinm_.resize(L + 1);
  for (int m = 0; m <= L; ++m) {
    cosm_[m].resize(nt);
    sinm_[m].resize(nt);
    for (int k = 0; k < nt; ++k) {
      cosm_[m][k] = std::cos(m * grid_.theta[k]);
      sinm_[m][k] = std::sin(m * grid_.theta[k]);
    }
  }
}

std::vector<std::complex<double>> Transform::fourier_rows(
    const GridScalar& h) const {
  const int L = grid_.L;
  const int np = grid_.n_phi;
  const int nt = grid_.n_theta;
  std::vector<std::complex<double>> rows(std::size_t(np) * (L + 1));
  for (int j = 0; j < np; ++j) {
    const double* hj = &h.v[std::size_t(j) * nt];
    for (int m = 0; m <= L; ++m) {
      const double* cm = cosm_[m].data();
      const double* sm = sinm_[m].data();
      double re = 0.0, im = 0.0;
      for (int k = 0; k < nt; ++k) {
        re += hj[k] * cm[k];
        im -= hj[k] * sm[k];
      }
      rows[std::size_t(j) * (L + 1) + m] = {re, im};
    }
  }
  return rows;
}

SpectralScalar Transform::analyze(const GridScalar& h) const {
  check_shape(grid_, h, "analyze");
  const int L = grid_.L;
  const auto rows = fourier_rows(h);
  SpectralScalar out(L, grid_.radius);
  const double wtheta = 2.0 * std::numbers::pi / grid_.n_theta;
  for (int j = 0; j < grid_.n_phi; ++j) {
    const double w = grid_.weight[j] * wtheta;
    for (int m = 0; m <= L; ++m) {
      const std::complex<double> f = w * rows[std::size_t(j) * (L + 1) + m];
      const double* tab = &lam_[m][std::size_t(j) * (L + 1 - m)];
      std::complex<double>* acc = &out.c[SpectralScalar::index(m, m)];
      // out(l,m) for l = m..L; stride between (l,m) and (l+1,m) is l+1.
      for (int l = m; l <= L; ++l) {
        *acc += tab[l - m] * f;
        acc += l + 1;
      }
    }
  }
  return out;
}

namespace {

// Accumulates sum_m mult_m Re[C(m,j) e^{i m theta_k}] over the grid.
template <typename Sampler>
GridScalar synth_loop(const Grid& g,
                      const std::vector<std::vector<double>>& cosm,
                      const std::vector<std::vector<double>>& sinm,
                      Sampler&& sample) {
  GridScalar h(g.n_phi, g.n_theta);
  for (int j = 0; j < g.n_phi; ++j) {
    double* hj = &h.v[std::size_t(j) * g.n_theta];
    for (int m = 0; m <= g.L; ++m) {
      const std::complex<double> c = sample(m, j);
      const double mult = (m == 0) ? 1.0 : 2.0;
      const double cr = mult * c.real();
      const double ci = mult * c.imag();
      if (cr == 0.0 && ci == 0.0) continue;
      const double* cm = cosm[m].data();
      const double* sm = sinm[m].data();
      for (int k = 0; k < g.n_theta; ++k) hj[k] += cr * cm[k] - ci * sm[k];
    }
  }
  return h;
}

}  // namespace

GridScalar Transform::synthesize(const SpectralScalar& s) const {
  const int L = grid_.L;
  if (s.L != L) throw InvalidParameterError("synthesize: truncation mismatch");
  return synth_loop(grid_, cosm_, sinm_, [&](int m, int j) {
    const double* tab = &lam_[m][std::size_t(j) * (L + 1 - m)];
    std::complex<double> c = 0.0;
    const std::complex<double>* a = &s.c[SpectralScalar::index(m, m)];
    for (int l = m; l <= L; ++l) {
      c += tab[l - m] * *a;
      a += l + 1;
    }
    return c;
  });
}

GridScalar Transform::synthesize_dphi(const SpectralScalar& s) const {
  const int L = grid_.L;
  if (s.L != L) throw InvalidParameterError("synthesize_dphi: truncation mismatch");
  return synth_loop(grid_, cosm_, sinm_, [&](int m, int j) {
    const double* tab = &dlam_[m][std::size_t(j) * (L + 1 - m)];
    std::complex<double> c = 0.0;
    const std::complex<double>* a = &s.c[SpectralScalar::index(m, m)];
    for (int l = m; l <= L; ++l) {
      c += tab[l - m] * *a;
      a += l + 1;
    }
    return c;
  });
}

GridScalar Transform::synthesize_dtheta_over_sin(const SpectralScalar& s) const {
  const int L = grid_.L;
  if (s.L != L)
    throw InvalidParameterError("synthesize_dtheta_over_sin: truncation mismatch");
  return synth_loop(grid_, cosm_, sinm_, [&](int m, int j) {
    if (m == 0) return std::complex<double>(0.0);
    const double* tab = &lam_[m][std::size_t(j) * (L + 1 - m)];
    std::complex<double> c = 0.0;
    const std::complex<double>* a = &s.c[SpectralScalar::index(m, m)];
    for (int l = m; l <= L; ++l) {
      c += tab[l - m] * *a;
      a += l + 1;
    }
    // (1/sin) d/dtheta brings i m / sin(phi).
    return std::complex<double>(0.0, m / grid_.sin_phi[j]) * c;
  });
}

JetTable Transform::jet(const SpectralScalar& s, int order) const {
  const int L = grid_.L;
  if (s.L != L) throw InvalidParameterError("jet: truncation mismatch");
  if (order < 0 || order > 3) throw InvalidParameterError("jet: order must be 0..3");

  JetTable t;
  t.order = order;
  for (int al = 0; al <= order; ++al)
    for (int be = 0; al + be <= order; ++be)
      t.d[al][be] = GridScalar(grid_.n_phi, grid_.n_theta);

  for (int j = 0; j < grid_.n_phi; ++j) {
    const double x = grid_.cos_phi[j];
    const double sp = grid_.sin_phi[j];
    const double cot = x / sp;
    for (int m = 0; m <= L; ++m) {
      const double* lam = &lam_[m][std::size_t(j) * (L + 1 - m)];
      const double* dla = &dlam_[m][std::size_t(j) * (L + 1 - m)];
      std::complex<double> g0 = 0.0, g1 = 0.0, h0 = 0.0, h1 = 0.0;
      const std::complex<double>* a = &s.c[SpectralScalar::index(m, m)];
      for (int l = m; l <= L; ++l) {
        const std::complex<double> alm = *a;
        g0 += lam[l - m] * alm;
        g1 += dla[l - m] * alm;
        const double ll1 = double(l) * (l + 1);
        h0 += ll1 * lam[l - m] * alm;
        h1 += ll1 * dla[l - m] * alm;
        a += l + 1;
      }
      // Higher phi-derivatives via the associated Legendre ODE:
      // lambda'' = -cot lambda' - (l(l+1) - m^2/sin^2) lambda
      // lambda''' = (1/sin^2 + m^2/sin^2) lambda' - cot lambda''
      //             - (sum_l l(l+1) term)' pieces - 2 m^2 cos/sin^3 lambda.
      const double m2s2 = double(m) * m / (sp * sp);
      std::complex<double> G[4] = {g0, g1, 0.0, 0.0};
      if (order >= 2) G[2] = -cot * g1 + m2s2 * g0 - h0;
      if (order >= 3)
        G[3] = (1.0 / (sp * sp)) * g1 - cot * G[2] + m2s2 * g1 - h1 -
               (2.0 * double(m) * m * x / (sp * sp * sp)) * g0;

      const double mult = (m == 0) ? 1.0 : 2.0;
      const double* cm = cosm_[m].data();
      const double* sm = sinm_[m].data();
      for (int al = 0; al <= order; ++al) {
        for (int be = 0; al + be <= order; ++be) {
          // (i m)^alpha G_beta
          std::complex<double> coef = G[be];
          for (int q = 0; q < al; ++q) coef *= std::complex<double>(0.0, m);
          const double cr = mult * coef.real();
          const double ci = mult * coef.imag();
          if (cr == 0.0 && ci == 0.0) continue;
          double* out = &t.d[al][be].v[std::size_t(j) * grid_.n_theta];
          for (int k = 0; k < grid_.n_theta; ++k)
            out[k] += cr * cm[k] - ci * sm[k];
        }
      }
    }
  }
  return t;
}

SpectralScalar Transform::vector_analysis(const GridScalar& fV,
                                          const GridScalar& fW) const {
  check_shape(grid_, fV, "vector_analysis");
  check_shape(grid_, fW, "vector_analysis");
  const int L = grid_.L;
  const auto rowsV = fourier_rows(fV);
  const auto rowsW = fourier_rows(fW);
  SpectralScalar out(L, grid_.radius);
  const double wtheta = 2.0 * std::numbers::pi / grid_.n_theta;
  for (int j = 0; j < grid_.n_phi; ++j) {
    const double w = grid_.weight[j] * wtheta;
    const double invs = 1.0 / grid_.sin_phi[j];
    for (int m = 0; m <= L; ++m) {
      const std::complex<double> fv = w * rowsV[std::size_t(j) * (L + 1) + m];
      // i * W_lm * f with W_lm = m lambda / sin(phi)
      const std::complex<double> fw = std::complex<double>(0.0, m * invs) * w *
                                      rowsW[std::size_t(j) * (L + 1) + m];
      const double* lam = &lam_[m][std::size_t(j) * (L + 1 - m)];
      const double* dla = &dlam_[m][std::size_t(j) * (L + 1 - m)];
      std::complex<double>* acc = &out.c[SpectralScalar::index(m, m)];
      for (int l = m; l <= L; ++l) {
        *acc += dla[l - m] * fv + lam[l - m] * fw;
        acc += l + 1;
      }
    }
  }
  const double inva = 1.0 / grid_.radius;
  for (auto& z : out.c) z *= inva;
  return out;
}

SpectralScalar laplacian(const SpectralScalar& s) {
  SpectralScalar out = s;
  const double a2 = s.radius * s.radius;
  for (int l = 0; l <= s.L; ++l) {
    const double sym = -double(l) * (l + 1) / a2;
    for (int m = 0; m <= l; ++m) out.at(l, m) = sym * s.at(l, m);
  }
  return out;
}

SpectralScalar invert_laplacian(const SpectralScalar& s) {
  const double mean_mag = std::abs(s.at(0, 0));
  if (mean_mag > 1e-10)
    throw GaugeError("invert_laplacian: input has nonzero mean, |(0,0)| = " +
                         std::to_string(mean_mag),
                     mean_mag);
  SpectralScalar out = s;
  out.at(0, 0) = 0.0;
  const double a2 = s.radius * s.radius;
  for (int l = 1; l <= s.L; ++l) {
    const double sym = -a2 / (double(l) * (l + 1));
    for (int m = 0; m <= l; ++m) out.at(l, m) = sym * s.at(l, m);
  }
  return out;
}

double spectral_power(const SpectralScalar& s) {
  double p = 0.0;
  for (int l = 0; l <= s.L; ++l)
    for (int m = 0; m <= l; ++m)
      p += (m == 0 ? 1.0 : 2.0) * std::norm(s.at(l, m));
  return p;
}

}  // namespace sphereflow
