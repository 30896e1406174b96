#include "lzs/rwa.hpp"

#include <cmath>
#include <stdexcept>

namespace lzs {

double bessel_j(int n, double x) {
  if (n < -200 || n > 200) throw std::invalid_argument("bessel order out of range (|n| <= 200)");
  if (!(std::abs(x) <= 500.0)) throw std::invalid_argument("bessel argument out of range (|x| <= 500)");
  const int m = std::abs(n);
  double sign = 1.0;
  if (n < 0 && (m % 2) == 1) sign = -sign;  // J_{-n} = (-1)^n J_n
  if (x < 0.0 && (m % 2) == 1) sign = -sign;
  return sign * std::cyl_bessel_j(static_cast<double>(m), std::abs(x));
}

DressedParams dressed_params(const TlsParams& tls, double f_dc, double f_ac, double omega0,
                             int n) {
  tls.validate();
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  const double eps0 = 4.0 * pi * tls.i_p * f_dc;
  const double amp = 4.0 * pi * tls.i_p * f_ac;

  DressedParams dp;
  dp.n = n;
  dp.x = amp / omega0;
  dp.c0 = bessel_j(-n, dp.x);
  dp.delta_n = tls.delta * dp.c0;
  dp.epsilon_n = eps0 - n * omega0;
  dp.omega_n = std::hypot(dp.epsilon_n, dp.delta_n);
  if (dp.omega_n > 0.0) {
    dp.cos2phi = dp.epsilon_n / dp.omega_n;
    dp.sin2phi = dp.delta_n / dp.omega_n;
  } else {
    dp.cos2phi = 1.0;
    dp.sin2phi = 0.0;
  }
  dp.detuned_beyond_rwa = std::abs(dp.epsilon_n) > 10.0 * std::abs(dp.delta_n);
  dp.weak_drive = !(amp * omega0 > 10.0 * tls.delta * tls.delta);
  return dp;
}

double p_plus_averaged(const DressedParams& dressed) {
  const double d2 = dressed.delta_n * dressed.delta_n;
  const double e2 = dressed.epsilon_n * dressed.epsilon_n;
  if (d2 + e2 == 0.0) return 0.5;
  return 1.0 - 0.5 * d2 / (e2 + d2);
}

namespace {

RwaRates assemble_rates(double relax_weight, double pure_weight, const OhmicBath& bath,
                        double omega_n, bool appendix_labels) {
  RwaRates out;
  out.gamma_emit = relax_weight * bath.g_weight(-omega_n);
  out.gamma_absorb = relax_weight * bath.g_weight(omega_n);
  out.gamma_r = out.gamma_emit + out.gamma_absorb;
  out.gamma_pure = pure_weight * bath.g_weight(0.0);
  out.gamma_d = 0.5 * out.gamma_r + out.gamma_pure;
  if (appendix_labels) std::swap(out.gamma_r, out.gamma_d);
  return out;
}

}  // namespace

RwaRates rates_longitudinal(const DressedParams& dressed, const OhmicBath& bath, double lambda,
                            bool appendix_labels) {
  const double relax = lambda * lambda * dressed.sin2phi * dressed.sin2phi;
  const double pure = lambda * lambda * dressed.cos2phi * dressed.cos2phi;
  return assemble_rates(relax, pure, bath, dressed.omega_n, appendix_labels);
}

RwaRates rates_transverse(const DressedParams& dressed, const OhmicBath& bath, double lambda,
                          bool appendix_labels) {
  const double base = lambda * dressed.c0;
  const double relax = base * base * dressed.cos2phi * dressed.cos2phi;
  const double pure = base * base * dressed.sin2phi * dressed.sin2phi;
  return assemble_rates(relax, pure, bath, dressed.omega_n, appendix_labels);
}

DressedCoefficients dressed_coupling_coefficients(double theta, double phi, int n, double x,
                                                  double lambda) {
  const double c2 = std::cos(2.0 * phi);
  const double s2 = std::sin(2.0 * phi);
  DressedCoefficients dc;
  dc.c0 = bessel_j(-n, x);
  dc.a_x0 = lambda * std::cos(theta) * s2;
  dc.a_xc = -lambda * std::sin(theta) * c2;
  dc.a_ys = -lambda * std::sin(theta);
  dc.a_z0 = lambda * std::cos(theta) * c2;
  dc.a_zc = lambda * std::sin(theta) * s2;
  dc.z_static = dc.a_z0 + dc.a_zc * dc.c0;
  dc.x_rabi = dc.a_x0 + dc.a_xc * dc.c0;
  return dc;
}

}  // namespace lzs
