#pragma once

#include <string>

namespace lzs {

// Ohmic environment with exponential cutoff,
//   J(w) = gamma * w * exp(-|w|/omega_c),  extended oddly to w < 0,
// and the thermal weight entering the transition rates,
//   g(w) = J(w) / (exp(w/T) - 1),  g(0) = gamma * T.
// Units: w in E_J/hbar, temperature in E_J/k_B.
struct OhmicBath {
  std::string tag;            // identity referenced by coupling operators
  double gamma = 0.001;       // dimensionless system-bath coupling
  double omega_c = 0.15;      // cutoff frequency
  double temperature = 0.0014;

  double spectral_density(double omega) const;
  double g_weight(double omega) const;
  void validate() const;  // throws std::invalid_argument on bad parameters
};

}  // namespace lzs
