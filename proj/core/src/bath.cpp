#include "lzs/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace lzs {

void OhmicBath::validate() const {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (!(omega_c > 0.0)) throw std::invalid_argument("omega_c must be > 0");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
}

double OhmicBath::spectral_density(double omega) const {
  if (!std::isfinite(omega)) throw std::invalid_argument("spectral_density: omega must be finite");
  return gamma * omega * std::exp(-std::abs(omega) / omega_c);
}

double OhmicBath::g_weight(double omega) const {
  if (!std::isfinite(omega)) throw std::invalid_argument("g_weight: omega must be finite");
  const double x = omega / temperature;
  if (std::abs(x) < 1e-6) {
    // w/(e^{w/T}-1) = T - w/2 + w^2/(12T) + O(w^4); avoids cancellation and
    // makes g(0) = gamma*T exact
    return gamma * std::exp(-std::abs(omega) / omega_c) *
           (temperature - 0.5 * omega + omega * omega / (12.0 * temperature));
  }
  if (x > 700.0) {
    // expm1(x) would overflow; 1/(e^x - 1) = e^{-x}/(1 - e^{-x})
    const double e = std::exp(-x);
    return spectral_density(omega) * e / (1.0 - e);
  }
  return spectral_density(omega) / std::expm1(x);
}

}  // namespace lzs
