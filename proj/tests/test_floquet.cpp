#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lzs/floquet.hpp"
#include "oracles.hpp"
#include "test_common.hpp"

using lzs::cx;
using lzs::FloquetBasis;
using lzs::FloquetSettings;
using lzs::Mat;
using lzs::pi;
using lzs::Vec;

namespace {

double recon_error(const FloquetBasis& b, int j) {
  Mat acc = Mat::Zero(b.dim, b.dim);
  const double t = b.time_at(j);
  for (int k = -b.k_max; k <= b.k_max; ++k)
    acc += b.fourier_mode(k) * std::exp(cx(0.0, -k * b.omega0 * t));
  return (acc - b.state_at(j)).cwiseAbs().maxCoeff();
}

// signed-order Bessel via the parity identity
double jn_signed(int n, double x) {
  if (n >= 0) return oracle::bessel_series(n, x);
  const double v = oracle::bessel_series(-n, x);
  return ((-n) % 2 == 0) ? v : -v;
}

}  // namespace

TEST_SUITE("floquet") {
  TEST_CASE("monodromy is unitary and converges with step doubling") {
    const lzs::DrivenModel m = testutil::tls_model(3.0, 0.003);
    const Mat u1 = lzs::propagate_one_period(m, 1024);
    const Mat u4 = lzs::propagate_one_period(m, 4096);
    const Mat u8 = lzs::propagate_one_period(m, 8192);
    const Mat eye = Mat::Identity(2, 2);
    CHECK((u8.adjoint() * u8 - eye).cwiseAbs().maxCoeff() < 1e-11);
    const double d18 = (u1 - u8).cwiseAbs().maxCoeff();
    const double d48 = (u4 - u8).cwiseAbs().maxCoeff();
    CHECK(d18 < 1e-6);
    CHECK(d48 < 1e-9);
    CHECK(d48 < d18);
    CHECK_THROWS_AS(lzs::propagate_one_period(m, 100), std::invalid_argument);
  }

  TEST_CASE("quasienergies fold into the first zone and match the ladder oracle") {
    const lzs::DrivenModel m = testutil::tls_model(3.0, 0.003);
    const FloquetBasis b = lzs::floquet_states(m);
    const double w0 = testutil::omega0_ref;
    for (int s = 0; s < 2; ++s) {
      CHECK(b.quasienergies(s) > -0.5 * w0);
      CHECK(b.quasienergies(s) <= 0.5 * w0);
    }
    const std::vector<double> ladder = oracle::shirley_quasienergies(m, 40);
    for (int s = 0; s < 2; ++s) {
      double best = 1e9;
      for (const double e : ladder) best = std::min(best, oracle::wrap_distance(b.quasienergies(s) - e, w0));
      CHECK(best < 1e-8);
    }
  }

  TEST_CASE("periodic states stay orthonormal along the grid") {
    const lzs::DrivenModel m = testutil::tls_model(2.2, 0.003);
    const FloquetBasis b = lzs::floquet_states(m);
    const Mat eye = Mat::Identity(2, 2);
    for (const int j : {0, 7, b.n_time / 3, b.n_time - 1}) {
      CHECK((b.state_at(j).adjoint() * b.state_at(j) - eye).cwiseAbs().maxCoeff() < 1e-9);
    }
    // the same statement in Fourier space: sum_k A_k^+ A_{k-q} = identity at q = 0
    Mat q0 = Mat::Zero(2, 2);
    Mat q3 = Mat::Zero(2, 2);
    for (int k = -b.k_max; k <= b.k_max; ++k) {
      q0 += b.fourier_mode(k).adjoint() * b.fourier_mode(k);
      if (k - 3 >= -b.k_max) q3 += b.fourier_mode(k).adjoint() * b.fourier_mode(k - 3);
    }
    CHECK((q0 - eye).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(q3.cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("fourier modes reconstruct the grid states") {
    const lzs::DrivenModel m = testutil::tls_model(3.0, 0.003);
    const FloquetBasis b = lzs::floquet_states(m);
    for (const int j : {0, 17, b.n_time / 2}) CHECK(recon_error(b, j) < 1e-8);
    // converged cutoff: the edge modes are negligible
    const double head = b.fourier_mode(0).cwiseAbs().maxCoeff();
    CHECK(b.fourier_mode(b.k_max).cwiseAbs().maxCoeff() <= 1e-8 * head);
    CHECK(b.fourier_mode(-b.k_max).cwiseAbs().maxCoeff() <= 1e-8 * head);
  }

  TEST_CASE("fourier modes are stable under time-grid doubling") {
    const lzs::DrivenModel m = testutil::tls_model(3.0, 0.003);
    FloquetSettings s1;
    FloquetSettings s2;
    s2.n_time = 8192;
    const FloquetBasis b1 = lzs::floquet_states(m, s1);
    const FloquetBasis b2 = lzs::floquet_states(m, s2);
    REQUIRE(b1.k_max == b2.k_max);
    for (const int k : {0, 1, -1, 5, -9}) {
      CHECK((b1.fourier_mode(k) - b2.fourier_mode(k)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  TEST_CASE("pure dephasing drive has the closed-form mode amplitudes") {
    // gapless limit: H(t) = -(eps0 + A cos(w0 t))/2 sigma_z integrates in
    // closed form and the mode amplitudes are Bessel functions of A/(2 w0)
    const double w0 = testutil::omega0_ref;
    const double eps0 = 0.4 * w0;
    const double amp = 1.7 * w0;
    lzs::DrivenModel m;
    m.kind = lzs::DriveKind::linear_cos;
    m.dim = 2;
    m.omega0 = w0;
    m.h0 = Mat::Zero(2, 2);
    m.h0(0, 0) = -0.5 * eps0;
    m.h0(1, 1) = 0.5 * eps0;
    m.hc = Mat::Zero(2, 2);
    m.hc(0, 0) = -0.5 * amp;
    m.hc(1, 1) = 0.5 * amp;
    m.hs = Mat::Zero(2, 2);
    m.projector_plus = Mat::Zero(2, 2);
    m.projector_plus(0, 0) = 1.0;

    const FloquetBasis b = lzs::floquet_states(m);
    CHECK(b.quasienergies(0) == doctest::Approx(-0.5 * eps0).epsilon(1e-10).scale(0.0));
    CHECK(b.quasienergies(1) == doctest::Approx(0.5 * eps0).epsilon(1e-10).scale(0.0));
    const double xt = amp / (2.0 * w0);
    for (int k = -6; k <= 6; ++k) {
      CHECK(std::abs(b.fourier_mode(k)(0, 0) - jn_signed(-k, xt)) < 1e-8);
      CHECK(std::abs(b.fourier_mode(k)(1, 1) - jn_signed(k, xt)) < 1e-8);
      CHECK(std::abs(b.fourier_mode(k)(0, 1)) < 1e-10);
      CHECK(std::abs(b.fourier_mode(k)(1, 0)) < 1e-10);
    }
  }

  TEST_CASE("insufficient forced cutoff raises after retries") {
    const lzs::DrivenModel m = testutil::tls_model(3.0, 0.003);
    FloquetSettings s;
    s.k_max_override = 1;
    CHECK_THROWS_WITH_AS(lzs::floquet_states(m, s), "fourier tail not converged",
                         std::runtime_error);
  }

  TEST_CASE("repeated eigenphases are detected and re-orthonormalized") {
    // undriven two-level system whose splitting is exactly twice the drive
    // quantum: both propagator eigenvalues coincide
    const lzs::TlsParams tls = testutil::reference_tls();
    const double w0 = testutil::omega0_ref;
    const double eps0 = std::sqrt(4.0 * w0 * w0 - tls.delta * tls.delta);
    const double f_dc = eps0 / (4.0 * pi * tls.i_p);
    const lzs::DrivenModel m = lzs::build_tls_model(tls, f_dc, 0.0, w0, {});
    const FloquetBasis b = lzs::floquet_states(m);
    CHECK(b.degenerate_eigenphases);
    const Mat eye = Mat::Identity(2, 2);
    CHECK((b.state_at(0).adjoint() * b.state_at(0) - eye).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("branch relabeling keeps the physical solution") {
    const lzs::DrivenModel m = testutil::tls_model(2.0, 0.0025);
    const FloquetBasis b = lzs::floquet_states(m);
    const FloquetBasis shifted = lzs::shift_branch(b, 1, 2);
    CHECK(shifted.quasienergies(1) ==
          doctest::Approx(b.quasienergies(1) + 2.0 * b.omega0).epsilon(1e-12).scale(0.0));
    CHECK(shifted.quasienergies(0) == b.quasienergies(0));
    for (const int j : {0, 5, b.n_time / 2}) {
      const double t = b.time_at(j);
      for (int s = 0; s < 2; ++s) {
        const Vec before = std::exp(cx(0.0, -b.quasienergies(s) * t)) * b.state_at(j).col(s);
        const Vec after =
            std::exp(cx(0.0, -shifted.quasienergies(s) * t)) * shifted.state_at(j).col(s);
        CHECK((before - after).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
    // modes relabel k -> k + shift
    for (const int k : {-5, 0, 3}) {
      CHECK((shifted.fourier_mode(k).col(1) - b.fourier_mode(k + 2).col(1)).cwiseAbs().maxCoeff() <
            1e-14);
    }
    CHECK_THROWS_AS(lzs::shift_branch(b, 5, 1), std::invalid_argument);
  }

  TEST_CASE("coupling elements satisfy the conjugation identity") {
    const lzs::DrivenModel m = testutil::tls_model(3.0, 0.003);
    const FloquetBasis b = lzs::floquet_states(m);
    Mat sz = Mat::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const lzs::CouplingElements e = lzs::matrix_elements(b, sz);
    for (const int q : {0, 1, 4, 11}) {
      CHECK((e.at(q) - e.at(-q).adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(e.tail_fraction() < 1e-6);
    // identity operator has only the q = 0 block
    const lzs::CouplingElements id = lzs::matrix_elements(b, Mat::Identity(2, 2));
    CHECK((id.at(0) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(id.at(3).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("settings validation") {
    FloquetSettings s;
    s.n_steps = 100;
    CHECK_THROWS_WITH_AS(s.validate(), "n_steps must be a power of two >= 256",
                         std::invalid_argument);
    s = FloquetSettings{};
    s.n_time = 6;
    CHECK_THROWS_WITH_AS(s.validate(), "n_time must be a power of two >= 4",
                         std::invalid_argument);
    s = FloquetSettings{};
    s.k_min = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = FloquetSettings{};
    s.k_max_override = -1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
}
