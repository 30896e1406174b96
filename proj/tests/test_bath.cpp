#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "lzs/bath.hpp"
#include "oracles.hpp"
#include "test_common.hpp"

using lzs::OhmicBath;

TEST_SUITE("bath") {
  TEST_CASE("spectral density is odd with an exponential cutoff") {
    const OhmicBath b = testutil::reference_bath();
    CHECK(b.spectral_density(0.0) == 0.0);
    CHECK(b.spectral_density(0.01) == doctest::Approx(0.001 * 0.01 * std::exp(-0.01 / 0.15)).epsilon(1e-15).scale(0.0));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(1e-6, 0.5);
    for (int i = 0; i < 50; ++i) {
      const double w = u(rng);
      CHECK(b.spectral_density(-w) == doctest::Approx(-b.spectral_density(w)).epsilon(1e-15).scale(0.0));
    }
  }

  TEST_CASE("zero-frequency weight equals gamma times temperature exactly") {
    OhmicBath b = testutil::reference_bath();
    CHECK(b.g_weight(0.0) == b.gamma * b.temperature);
    b.gamma = 0.37;
    b.temperature = 0.0021;
    CHECK(b.g_weight(0.0) == b.gamma * b.temperature);
  }

  TEST_CASE("emission minus absorption recovers the spectral density") {
    // g(-w) - g(w) = J(w), the detailed-balance identity
    const OhmicBath b = testutil::reference_bath();
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int i = 0; i < 100; ++i) {
      double w = u(rng);
      if (std::abs(w) < 1e-8) w += 1e-3;
      const double lhs = b.g_weight(-w) - b.g_weight(w);
      CHECK(lhs == doctest::Approx(b.spectral_density(w)).epsilon(1e-14).scale(0.0));
    }
  }

  TEST_CASE("thermal weight at the reference drive frequency") {
    const OhmicBath b = testutil::reference_bath();
    CHECK(b.g_weight(0.003) == doctest::Approx(3.90842e-7).epsilon(1e-5).scale(0.0));
    CHECK(b.g_weight(-0.003) == doctest::Approx(3.33140e-6).epsilon(1e-5).scale(0.0));
    // emission exceeds absorption at positive frequency
    CHECK(b.g_weight(-0.003) > b.g_weight(0.003));
    // ratio follows the Boltzmann factor
    CHECK(b.g_weight(0.003) / b.g_weight(-0.003) ==
          doctest::Approx(std::exp(-0.003 / b.temperature)).epsilon(1e-12));
  }

  TEST_CASE("weight is continuous through zero frequency") {
    const OhmicBath b = testutil::reference_bath();
    const double g0 = b.g_weight(0.0);
    CHECK(std::abs(b.g_weight(1e-9) - g0) < 1e-9 * b.gamma);
    CHECK(std::abs(b.g_weight(-1e-9) - g0) < 1e-9 * b.gamma);
    // the small-argument branch joins the generic branch smoothly
    const double edge = 1e-6 * b.temperature;
    CHECK(b.g_weight(0.9999 * edge) == doctest::Approx(b.g_weight(1.0001 * edge)).epsilon(1e-9).scale(0.0));
    CHECK(b.g_weight(-0.9999 * edge) == doctest::Approx(b.g_weight(-1.0001 * edge)).epsilon(1e-9).scale(0.0));
  }

  TEST_CASE("large arguments neither overflow nor go negative") {
    OhmicBath b = testutil::reference_bath();
    b.temperature = 1e-4;
    const double gp = b.g_weight(0.14);  // w/T = 1400, past the exp overflow edge
    CHECK(std::isfinite(gp));
    CHECK(gp >= 0.0);
    CHECK(gp < 1e-300);
    const double gm = b.g_weight(-0.14);
    CHECK(gm == doctest::Approx(b.spectral_density(0.14)).epsilon(1e-12).scale(0.0));
  }

  TEST_CASE("stationary weight of a two-state balance matches the independent oracle") {
    const OhmicBath b = testutil::reference_bath();
    for (const double w : {0.001, 0.003, 0.01, 0.05}) {
      const double up = b.g_weight(w);
      const double down = b.g_weight(-w);
      const double lib = up / (up + down);
      const double ora = oracle::rate_equation_excited_weight(w, b.gamma, b.omega_c, b.temperature);
      CHECK(lib == doctest::Approx(ora).epsilon(1e-12).scale(0.0));
    }
  }

  TEST_CASE("parameter validation") {
    OhmicBath b = testutil::reference_bath();
    b.gamma = -1e-9;
    CHECK_THROWS_WITH_AS(b.validate(), "gamma must be >= 0", std::invalid_argument);
    b = testutil::reference_bath();
    b.omega_c = 0.0;
    CHECK_THROWS_WITH_AS(b.validate(), "omega_c must be > 0", std::invalid_argument);
    b = testutil::reference_bath();
    b.temperature = 0.0;
    CHECK_THROWS_WITH_AS(b.validate(), "temperature must be > 0", std::invalid_argument);
    b = testutil::reference_bath();
    b.gamma = 0.0;
    CHECK_NOTHROW(b.validate());
    CHECK(b.g_weight(0.01) == 0.0);
  }
}
