#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzs/bath.hpp"
#include "lzs/floquet.hpp"
#include "lzs/types.hpp"

namespace lzs {

// Fourier-space matrix elements of one system-bath coupling operator,
// labeled by the bath it connects to.
struct TaggedElements {
  std::string bath_tag;
  CouplingElements elems;
};

// Golden-rule tensor over Floquet-state pairs, stored with the row-major
// pair index (a, b) -> a * dim + b:
//   r(ab, a'b') = 1/2 sum_nu sum_q g_nu(e_a - e_a' + q w0)
//                 * A_nu(q)(a, a') * A_nu(-q)(b', b)
struct RateTensor {
  int dim = 0;
  Mat r;
};

RateTensor rate_tensor(const FloquetBasis& basis, const std::vector<TaggedElements>& couplings,
                       const std::vector<OhmicBath>& baths);

// Time-independent generator for the density matrix in the periodic
// eigenbasis, d rho/dt = lambda rho (vectorized row-major).
struct Generator {
  int dim = 0;
  double omega0 = 0.0;
  RealVec quasienergies;
  Mat lambda;
  double trace_defect = 0.0;
};

Generator build_generator(const FloquetBasis& basis, const RateTensor& rates);

// Decay times read off the generator spectrum. The eigenvalue closest to
// zero (the steady state) is excluded; the rest split into a real set
// (population relaxation) and complex-pair set (coherence decay).
struct Timescales {
  double t_relax = 0.0;
  std::optional<double> t_dephase;
  std::optional<double> t_pure;
  bool has_complex_pair = false;
  Vec eigenvalues;
};

Timescales timescales(const Generator& gen);

// Thrown when the generator kernel is degenerate: two candidate fixed
// points are attached so callers can report both.
class SteadyStateError : public std::runtime_error {
 public:
  SteadyStateError(const std::string& what, Mat a, Mat b)
      : std::runtime_error(what), candidate_a(std::move(a)), candidate_b(std::move(b)) {}
  Mat candidate_a;
  Mat candidate_b;
};

Mat steady_state(const Generator& gen);

// Propagates rho(t) = exp(lambda t) rho(0). Uses the eigendecomposition of
// the generator when it reconstructs accurately, otherwise falls back to a
// scaling-and-squaring matrix exponential per requested time.
class Evolver {
 public:
  explicit Evolver(const Generator& gen);
  Mat evolve_to(const Mat& rho0, double t) const;
  const std::string& method() const { return method_; }

 private:
  int dim_ = 0;
  std::string method_;
  Mat lambda_;
  Vec eigenvalues_;
  Mat vectors_;
  Eigen::PartialPivLU<Mat> lu_;
};

// Convenience wrapper: times must be non-negative and ascending.
std::vector<Mat> evolve(const Generator& gen, const Mat& rho0, const std::vector<double>& times);

// Ground state of the undriven Hamiltonian; throws if the ground doublet is
// degenerate within tolerance.
Vec initial_state(const DrivenModel& model);

// Density matrix of a pure lab-frame state in the periodic eigenbasis at t = 0.
Mat initial_density(const FloquetBasis& basis, const Vec& psi0);

// Lab-frame projector expressed in the periodic eigenbasis: exact at
// stroboscopic times t = n tau.
Mat floquet_projector(const FloquetBasis& basis, const Mat& projector);

// Same, averaged over one period of the periodic parts.
Mat floquet_projector_period_avg(const FloquetBasis& basis, const Mat& projector);

// Expectation Re tr(g rho) for a projector image g from the helpers above.
double population(const Mat& g, const Mat& rho_f);

// Coherent (dissipation-free) population average over the first n_periods
// drive cycles; n_periods <= 0 gives the infinite-time limit.
double isolated_average(const FloquetBasis& basis, const Mat& projector, const Vec& psi0,
                        long n_periods);

// Most negative eigenvalue of the Hermitized density matrix, clamped at 0.
double positivity_defect(const Mat& rho);

}  // namespace lzs
