#pragma once

#include <string>
#include <vector>

#include "lzs/types.hpp"

namespace lzs {

// Static loop parameters. The device is a three-junction loop described in the
// two-junction charge basis |n1, n2> with n1, n2 in [-N, N]; the symmetric and
// antisymmetric charges n_p = n1 + n2 and n_m = n1 - n2 act on that lattice.
// Energies are in E_J, flux in Phi_0.
struct FqParams {
  double alpha = 0.8;  // smaller-junction area ratio
  double eta = 0.25;   // sqrt(8 E_C / E_J)
  double f_dc = 0.0;   // static flux detuning from the half-quantum point
  int n_charge = 10;   // charge cutoff N; basis dimension (2N+1)^2

  void validate() const;  // throws std::invalid_argument
};

// Flux-independent operator blocks for one (alpha, eta, N) tuple, built once
// and reused across flux values. With ft = f - 1/2 the loop Hamiltonian is
//   H(f) = diag(kinetic) + (2+alpha) - cos_sum + alpha*(cos(2 pi ft) c2m - sin(2 pi ft) i y2m)
// because -cos(2 pi f + 2 phi_m) = +cos(2 pi ft + 2 phi_m). Keeping the
// detuned form makes H exactly real symmetric at ft = 0.
struct JunctionOperators {
  double alpha = 0.0, eta = 0.0;
  int n_charge = 0;
  int dim = 0;
  double e_p = 0.0, e_m = 0.0;  // charging scales eta^2/4 and eta^2/(4+8 alpha)
  RealVec kinetic;              // E_p n_p^2 + E_m n_m^2 on the diagonal
  RealVec n_p, n_m;             // charge operators (diagonal)
  RealMat cos_sum;              // cos(phi_1) + cos(phi_2)
  RealMat c2m;                  // cos(2 phi_m)
  RealMat y2m;                  // sin(2 phi_m) = i * y2m, y2m real antisymmetric
};

JunctionOperators build_junction_operators(const FqParams& params);

// Full loop Hamiltonian at absolute flux f (complex Hermitian in general).
Mat build_fq_hamiltonian(const JunctionOperators& ops, double f);

// Same Hamiltonian parametrized by the detuning ft = f - 1/2; exact real
// symmetric limit at ft = 0 is used internally for the symmetric-point solve.
Mat build_fq_hamiltonian_detuned(const JunctionOperators& ops, double f_detune);

// Loop-current operator alpha*sin(2 pi f + 2 phi_m) at detuning ft.
Mat loop_current_operator(const JunctionOperators& ops, double f_detune);

// k lowest eigenpairs of a Hermitian matrix, ascending, orthonormal, with each
// eigenvector's largest-magnitude component made real positive.
struct StaticSpectrum {
  RealVec energies;
  Mat states;  // columns
};

StaticSpectrum diagonalize_static(const Mat& h, int k);

// Two-level reduction of the loop at the symmetric point plus the noise
// coupling magnitudes. i_p is in E_J/Phi_0.
struct TlsParams {
  double delta = 0.0;
  double i_p = 0.0;
  double lambda_f = 0.0;     // flux-noise coupling, 2 pi |<+|I|+>|
  double lambda_ch = 0.0;    // charge-noise coupling via n_m
  double lambda_cc = 0.0;    // critical-current-noise coupling via the potential
  double lambda_ch_p = 0.0;  // neglected n_p channel, reported for reference

  void validate() const;
};

TlsParams compute_tls_parameters(const JunctionOperators& ops);

// Periodically driven truncated model. Two parametrizations share the type:
//   linear_cos: H(t) = h0 + cos(w0 t) hc + sin(w0 t) hs
//   flux_trig:  H(t) = h0 + cos(2 pi f(t)) hc + sin(2 pi f(t)) hs,
//               f(t) = 1/2 + f_dc + f_ac cos(w0 t)
// Coupling operators carry their strength and reference a bath by tag.
enum class DriveKind { linear_cos, flux_trig };

struct ModelCoupling {
  Mat op;
  std::string bath_tag;
};

struct DrivenModel {
  DriveKind kind = DriveKind::linear_cos;
  int dim = 0;
  double omega0 = 0.0;
  double f_dc = 0.0;  // detuning from the half-quantum point
  double f_ac = 0.0;
  Mat h0, hc, hs;
  std::vector<ModelCoupling> couplings;
  Mat projector_plus;

  double period() const { return 2.0 * pi / omega0; }
  Mat hamiltonian(double t) const;
  Mat hamiltonian_static() const;  // drive amplitude set to zero
  double drive_scale() const;      // largest oscillating matrix-element scale
  double static_span() const;      // eigenvalue spread of hamiltonian_static()
};

// Two-level couplings: Pauli axis, strength, bath tag. The pure cases are
// (z, lambda_f) for flux noise and (y, lambda_ch) for charge noise; mixing
// uses lambda_f = cos(theta), lambda_ch = sin(theta).
enum class PauliAxis { z, y, x };

struct TlsCoupling {
  PauliAxis axis = PauliAxis::z;
  double strength = 1.0;
  std::string bath_tag;
};

// Two-level driven model in the |+,-> basis:
//   H(t) = -eps(t)/2 sigma_z - Delta/2 sigma_x, eps(t) = eps0 + A cos(w0 t),
//   eps0 = 4 pi I_p f_dc, A = 4 pi I_p f_ac;
// coupling operators -lambda sigma_axis; projector_plus = diag(1, 0).
DrivenModel build_tls_model(const TlsParams& tls, double f_dc, double f_ac, double omega0,
                            const std::vector<TlsCoupling>& couplings);

// Which physical noise channels a multilevel model carries.
enum class NoiseKind { flux, charge };

// Flux-static data of the truncated multilevel model: the m lowest eigenstates
// at f = 1/2 + f_dc, the drive blocks projected onto them (the cos/sin
// decomposition keeps the drive exact within the subspace), the projected
// noise operators evaluated at the static flux, and the projector onto the
// measured persistent-current branch. Depends on f_dc only, so sweeps may
// share one instance across drive amplitudes.
struct MultilevelStatics {
  int m = 0;
  double f_dc = 0.0;
  RealVec level_energies;  // m lowest, ascending, shifted so the ground sits at 0
  Mat h0, hc, hs;          // h0 includes the shift; hc/hs as in the flux_trig form
  Mat flux_op;             // 2 pi alpha sin(2 pi f_static + 2 phi_m), projected
  Mat charge_op;           // E_m n_m, projected
  Mat projector_plus;
};

MultilevelStatics project_multilevel(const JunctionOperators& ops, double f_dc, int m);

DrivenModel build_multilevel_model(const MultilevelStatics& statics, double f_ac, double omega0,
                                   const std::vector<std::pair<NoiseKind, std::string>>& noise,
                                   double strength = 1.0);

}  // namespace lzs
