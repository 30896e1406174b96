#pragma once

#include "lzs/bath.hpp"
#include "lzs/model.hpp"
#include "lzs/types.hpp"

namespace lzs {

// Bessel function of the first kind, integer order, signed n and x.
// Requires |n| <= 200 and |x| <= 500.
double bessel_j(int n, double x);

// Rotating-frame description of the n-photon resonance of a driven
// two-level system: dressed gap, detuning, and generalized Rabi frequency.
struct DressedParams {
  int n = 0;
  double x = 0.0;          // drive index A / omega0
  double c0 = 1.0;         // J_{-n}(x)
  double delta_n = 0.0;    // delta * J_{-n}(x)
  double epsilon_n = 0.0;  // eps0 - n * omega0
  double omega_n = 0.0;    // sqrt(epsilon_n^2 + delta_n^2)
  double cos2phi = 1.0;    // epsilon_n / omega_n
  double sin2phi = 0.0;    // delta_n / omega_n
  // validity diagnostics, informational only
  bool detuned_beyond_rwa = false;  // |epsilon_n| >> |delta_n|
  bool weak_drive = false;          // A * omega0 not >> delta^2
};

DressedParams dressed_params(const TlsParams& tls, double f_dc, double f_ac, double omega0,
                             int n);

// Time-averaged probability of the positive-current state near the
// n-photon resonance: 1 - delta_n^2 / (2 (epsilon_n^2 + delta_n^2)).
double p_plus_averaged(const DressedParams& dressed);

// Closed-form golden-rule rates in the rotating frame. gamma_r is the
// population-decay rate (the g(-omega_n) + g(omega_n) combination),
// gamma_d = gamma_r / 2 + gamma_pure. Set appendix_labels to export the
// alternative labeling with the two names exchanged.
struct RwaRates {
  double gamma_r = 0.0;
  double gamma_d = 0.0;
  double gamma_pure = 0.0;
  double gamma_emit = 0.0;    // g(-omega_n) component of gamma_r
  double gamma_absorb = 0.0;  // g(+omega_n) component of gamma_r
};

RwaRates rates_longitudinal(const DressedParams& dressed, const OhmicBath& bath,
                            double lambda = 1.0, bool appendix_labels = false);
RwaRates rates_transverse(const DressedParams& dressed, const OhmicBath& bath,
                          double lambda = 1.0, bool appendix_labels = false);

// Rotating-frame coupling coefficients for a mixed coupling
// lambda (cos(theta) sigma_z + sin(theta) sigma_x), with the static and
// Rabi-frequency channel magnitudes z_static = a_z0 + a_zc c0 and
// x_rabi = a_x0 + a_xc c0.
struct DressedCoefficients {
  double a_x0 = 0.0;
  double a_xc = 0.0;
  double a_ys = 0.0;
  double a_z0 = 0.0;
  double a_zc = 0.0;
  double c0 = 1.0;
  double z_static = 0.0;
  double x_rabi = 0.0;
};

DressedCoefficients dressed_coupling_coefficients(double theta, double phi, int n, double x,
                                                  double lambda = 1.0);

}  // namespace lzs
