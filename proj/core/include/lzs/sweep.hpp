#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lzs/master.hpp"
#include "lzs/rwa.hpp"
#include "lzs/types.hpp"

namespace lzs {

enum class ModelKind { tls, multilevel };
enum class RunMode { finite_time, steady_state, timescales, rwa_compare, isolated };
enum class CouplingKind { sigma_z, sigma_y, sigma_x, mixed, flux, charge };

// flag column bits
inline constexpr int flag_positivity = 1;
inline constexpr int flag_no_complex_pair = 2;
inline constexpr int flag_nonunique_steady = 4;
inline constexpr int flag_solver_failure = 8;

struct CouplingSpec {
  std::string name;
  std::string bath_tag;
  CouplingKind kind = CouplingKind::sigma_z;
  double strength = 1.0;
  bool derive_strength = false;  // replace strength with the device-derived magnitude
};

struct SweepSpec {
  ModelKind model_kind = ModelKind::tls;
  RunMode mode = RunMode::finite_time;
  FqParams device;
  int levels = 4;         // multilevel truncation
  bool derive_tls = true; // two-level parameters from the junction model
  TlsParams tls;          // used directly when derive_tls is false
  double omega0 = 0.003;
  std::vector<double> f_dc{0.0};
  std::vector<double> f_ac{0.003};
  std::vector<double> theta;  // mixing-angle grid, radians; requires a mixed coupling
  std::vector<OhmicBath> baths;
  std::vector<CouplingSpec> couplings;
  std::vector<double> times_tau{1000.0};
  bool period_average = false;
  long n_periods = 1000;  // isolated mode; <= 0 means the infinite-time limit
  int resonance = -1;     // rwa_compare index; -1 picks round(eps0 / omega0)
  FloquetSettings solver;
  int max_tail_retries = 3;
  int threads = 1;

  void validate() const;
};

struct LzsMap {
  RunMode mode = RunMode::finite_time;
  std::vector<std::string> columns;
  RealMat values;  // one row per grid record, columns as listed
  std::vector<std::pair<std::string, std::string>> metadata;
  double f_omega = 0.0;  // drive frequency in flux units, omega0 / (4 pi i_p)

  int column(const std::string& name) const;
};

// Evaluates the grid in deterministic order (f_dc outer, then f_ac, then
// theta, then time); failed points become NaN rows with a flag code.
LzsMap run_sweep(const SweepSpec& spec);

// Dissipation-free time-averaged population for a single model.
double isolated_average(const DrivenModel& model, const FloquetSettings& solver, long n_periods);

// Odd/even shape score of a resonance at n * f_omega from a 1-D f_dc scan:
// 0 for symmetric dips, +-1 for fully antisymmetric shapes. window is the
// half-width in f_omega units. detrend subtracts the straight line through
// the window edges first (diagnostic variant).
double asymmetry_metric(const LzsMap& map, int n, double window, bool detrend = false);

}  // namespace lzs
