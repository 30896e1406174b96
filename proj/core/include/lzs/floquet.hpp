#pragma once

#include <vector>

#include "lzs/model.hpp"
#include "lzs/types.hpp"

namespace lzs {

// Controls for the one-period propagation and the Fourier analysis of the
// periodic states. Grid sizes must be powers of two.
struct FloquetSettings {
  int n_steps = 4096;      // Magnus substeps per period, >= 256
  int n_time = 4096;       // stroboscopic samples per period, raised to >= 4 k_max
  int k_min = 32;          // lower bound on the Fourier cutoff
  int k_max_override = 0;  // > 0 forces the Fourier cutoff
  void validate() const;
};

// Periodic eigenbasis of the one-period propagator. Column s of
// states_grid[j] holds the periodic part phi_s(t_j); the full solution is
// exp(-i e_s t) phi_s(t). fourier[k + k_max] holds A_k with
// phi(t) = sum_k A_k exp(-i k omega0 t).
struct FloquetBasis {
  double omega0 = 0.0;
  int dim = 0;
  int k_max = 0;
  int n_time = 0;
  RealVec quasienergies;  // folded to (-omega0/2, omega0/2]
  Mat monodromy;
  std::vector<Mat> states_grid;
  std::vector<Mat> fourier;
  bool degenerate_eigenphases = false;

  double period() const { return 2.0 * pi / omega0; }
  double time_at(int j) const { return period() * j / n_time; }
  const Mat& state_at(int j) const { return states_grid[static_cast<size_t>(j)]; }
  const Mat& fourier_mode(int k) const { return fourier[static_cast<size_t>(k + k_max)]; }
};

// Fourth-order Magnus propagator over one full period.
Mat propagate_one_period(const DrivenModel& model, int n_steps);

// Diagonalizes the monodromy matrix, orders states by overlap with the
// static eigenbasis, and tabulates periodic parts plus their Fourier modes.
FloquetBasis floquet_states(const DrivenModel& model, const FloquetSettings& settings = {});

// Relabels one state's quasienergy branch: e -> e + shift * omega0 with the
// periodic part re-phased so the physical solution is unchanged.
FloquetBasis shift_branch(const FloquetBasis& basis, int state, int shift);

// Fourier components of a system operator between Floquet states:
// at(q)(a, b) = sum_k <a_k| op |b_{k-q}>.
struct CouplingElements {
  int dim = 0;
  int k_max = 0;
  std::vector<Mat> blocks;
  const Mat& at(int q) const { return blocks[static_cast<size_t>(q + k_max)]; }
  // largest |q| = k_max entry relative to the q = 0 block
  double tail_fraction() const;
};

CouplingElements matrix_elements(const FloquetBasis& basis, const Mat& op);

}  // namespace lzs
