#include "lzs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace lzs {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
constexpr double inf_v = std::numeric_limits<double>::infinity();

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::finite_time: return "finite_time";
    case RunMode::steady_state: return "steady_state";
    case RunMode::timescales: return "timescales";
    case RunMode::rwa_compare: return "rwa_compare";
    case RunMode::isolated: return "isolated";
  }
  return "?";
}

std::vector<std::string> columns_for(RunMode m) {
  switch (m) {
    case RunMode::finite_time:
    case RunMode::steady_state:
      return {"f_dc", "f_ac", "theta", "t_over_tau", "p_plus", "positivity_defect", "flag"};
    case RunMode::timescales:
      return {"f_dc", "f_ac", "theta", "t_r", "t_d", "t_phi", "flag"};
    case RunMode::rwa_compare:
      return {"f_dc", "f_ac", "n", "gamma_r_num", "gamma_d_num", "gamma_r_rwa", "gamma_d_rwa"};
    case RunMode::isolated:
      return {"f_dc", "f_ac", "p_plus_avg"};
  }
  return {};
}

bool needs_dissipation(RunMode m) { return m != RunMode::isolated; }

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Resolved {
  TlsParams tls;
  double f_omega = 0.0;
  std::vector<double> strengths;                 // per coupling spec
  std::map<double, MultilevelStatics> statics;   // multilevel, keyed by f_dc
};

Resolved resolve_inputs(const SweepSpec& spec) {
  Resolved r;
  const bool need_junction = spec.derive_tls || spec.model_kind == ModelKind::multilevel ||
                             std::any_of(spec.couplings.begin(), spec.couplings.end(),
                                         [](const CouplingSpec& c) { return c.derive_strength; });
  JunctionOperators ops;
  if (need_junction) ops = build_junction_operators(spec.device);

  if (spec.model_kind == ModelKind::tls && !spec.derive_tls)
    r.tls = spec.tls;
  else
    r.tls = compute_tls_parameters(ops);
  r.f_omega = spec.omega0 / (4.0 * pi * r.tls.i_p);

  for (const CouplingSpec& c : spec.couplings) {
    double s = c.strength;
    if (c.derive_strength) {
      switch (c.kind) {
        case CouplingKind::sigma_z: s = r.tls.lambda_f; break;
        case CouplingKind::sigma_y: s = r.tls.lambda_ch; break;
        case CouplingKind::sigma_x: s = r.tls.lambda_cc; break;
        default: s = 1.0; break;
      }
    }
    r.strengths.push_back(s);
  }

  if (spec.model_kind == ModelKind::multilevel) {
    for (double fdc : spec.f_dc)
      if (r.statics.find(fdc) == r.statics.end())
        r.statics.emplace(fdc, project_multilevel(ops, fdc, spec.levels));
  }
  return r;
}

DrivenModel make_point_model(const SweepSpec& spec, const Resolved& res, double fdc, double fac,
                             double theta) {
  if (spec.model_kind == ModelKind::tls) {
    std::vector<TlsCoupling> tc;
    for (size_t i = 0; i < spec.couplings.size(); ++i) {
      const CouplingSpec& c = spec.couplings[i];
      const double s = res.strengths[i];
      switch (c.kind) {
        case CouplingKind::sigma_z: tc.push_back({PauliAxis::z, s, c.bath_tag}); break;
        case CouplingKind::sigma_y: tc.push_back({PauliAxis::y, s, c.bath_tag}); break;
        case CouplingKind::sigma_x: tc.push_back({PauliAxis::x, s, c.bath_tag}); break;
        case CouplingKind::mixed:
          tc.push_back({PauliAxis::z, s * std::cos(theta), c.bath_tag});
          tc.push_back({PauliAxis::y, s * std::sin(theta), c.bath_tag});
          break;
        default: break;
      }
    }
    return build_tls_model(res.tls, fdc, fac, spec.omega0, tc);
  }

  const MultilevelStatics& st = res.statics.at(fdc);
  DrivenModel model = build_multilevel_model(st, fac, spec.omega0, {}, 1.0);
  for (size_t i = 0; i < spec.couplings.size(); ++i) {
    const CouplingSpec& c = spec.couplings[i];
    const Mat& op = (c.kind == CouplingKind::flux) ? st.flux_op : st.charge_op;
    model.couplings.push_back({res.strengths[i] * op, c.bath_tag});
  }
  return model;
}

struct BasisBundle {
  FloquetBasis basis;
  std::vector<TaggedElements> elems;
};

// rebuilds with a larger Fourier cutoff until the |q| = k_max shell of every
// coupling is negligible against its q = 0 block
BasisBundle build_basis(const DrivenModel& model, const FloquetSettings& settings, int retries) {
  FloquetSettings s = settings;
  for (int attempt = 0;; ++attempt) {
    BasisBundle out{floquet_states(model, s), {}};
    double tail = 0.0;
    for (const ModelCoupling& c : model.couplings) {
      TaggedElements te{c.bath_tag, matrix_elements(out.basis, c.op)};
      tail = std::max(tail, te.elems.tail_fraction());
      out.elems.push_back(std::move(te));
    }
    if (tail <= 1e-8) return out;
    if (attempt >= retries) throw std::runtime_error("coupling fourier tail not converged");
    s.k_max_override = static_cast<int>(std::ceil(1.5 * out.basis.k_max));
  }
}

}  // namespace

void SweepSpec::validate() const {
  if (f_dc.empty() || f_ac.empty()) throw std::invalid_argument("f_dc and f_ac grids must be non-empty");
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (max_tail_retries < 0) throw std::invalid_argument("max_tail_retries must be >= 0");
  if (levels < 2 || levels > 8) throw std::invalid_argument("levels must be in [2, 8]");
  device.validate();
  if (model_kind == ModelKind::tls && !derive_tls) tls.validate();
  solver.validate();
  for (const OhmicBath& b : baths) b.validate();

  if (mode == RunMode::finite_time) {
    if (times_tau.empty()) throw std::invalid_argument("times_tau must be non-empty");
    for (double t : times_tau)
      if (!(t >= 0.0)) throw std::invalid_argument("times_tau entries must be >= 0");
  }

  bool any_mixed = false;
  for (const CouplingSpec& c : couplings) {
    const bool tls_kind = c.kind == CouplingKind::sigma_z || c.kind == CouplingKind::sigma_y ||
                          c.kind == CouplingKind::sigma_x || c.kind == CouplingKind::mixed;
    if (model_kind == ModelKind::tls && !tls_kind)
      throw std::invalid_argument("coupling " + c.name + ": flux/charge kinds need the multilevel model");
    if (model_kind == ModelKind::multilevel && tls_kind)
      throw std::invalid_argument("coupling " + c.name + ": pauli kinds need the two-level model");
    if (c.kind == CouplingKind::mixed) any_mixed = true;
    bool found = false;
    for (const OhmicBath& b : baths) found = found || b.tag == c.bath_tag;
    if (!found && needs_dissipation(mode))
      throw std::invalid_argument("coupling " + c.name + " references unknown bath tag " + c.bath_tag);
  }
  if (any_mixed && theta.empty())
    throw std::invalid_argument("a mixed coupling requires a theta grid");
  if (!theta.empty() && !any_mixed)
    throw std::invalid_argument("a theta grid requires a mixed coupling");

  if (needs_dissipation(mode) && couplings.empty())
    throw std::invalid_argument("dissipative modes need at least one coupling");
  if (mode == RunMode::rwa_compare) {
    if (model_kind != ModelKind::tls)
      throw std::invalid_argument("rwa_compare needs the two-level model");
    if (couplings.size() != 1 ||
        (couplings[0].kind != CouplingKind::sigma_z && couplings[0].kind != CouplingKind::sigma_y))
      throw std::invalid_argument("rwa_compare needs exactly one sigma_z or sigma_y coupling");
  }
}

int LzsMap::column(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown column " + name);
}

LzsMap run_sweep(const SweepSpec& spec) {
  spec.validate();
  const Resolved res = resolve_inputs(spec);
  const double tau = 2.0 * pi / spec.omega0;

  const std::vector<double> theta_grid = spec.theta.empty() ? std::vector<double>{nan_v} : spec.theta;
  const int n_fdc = static_cast<int>(spec.f_dc.size());
  const int n_fac = static_cast<int>(spec.f_ac.size());
  const int n_th = static_cast<int>(theta_grid.size());
  const int n_points = n_fdc * n_fac * n_th;
  const int rows_per_point =
      (spec.mode == RunMode::finite_time) ? static_cast<int>(spec.times_tau.size()) : 1;

  LzsMap map;
  map.mode = spec.mode;
  map.columns = columns_for(spec.mode);
  map.f_omega = res.f_omega;
  map.values = RealMat::Constant(n_points * rows_per_point, static_cast<int>(map.columns.size()), nan_v);

  std::atomic<int> next{0};
  std::atomic<int> k_max_used{0};
  std::atomic<int> n_failed{0};

  auto compute_point = [&](int ip) {
    const int i_fdc = ip / (n_fac * n_th);
    const int i_fac = (ip / n_th) % n_fac;
    const int i_th = ip % n_th;
    const double fdc = spec.f_dc[static_cast<size_t>(i_fdc)];
    const double fac = spec.f_ac[static_cast<size_t>(i_fac)];
    const double th = theta_grid[static_cast<size_t>(i_th)];
    const int row0 = ip * rows_per_point;

    // coordinates are always recorded, even for failed points
    for (int r = 0; r < rows_per_point; ++r) {
      map.values(row0 + r, 0) = fdc;
      map.values(row0 + r, 1) = fac;
      if (spec.mode != RunMode::rwa_compare && spec.mode != RunMode::isolated)
        map.values(row0 + r, 2) = th;
      if (spec.mode == RunMode::finite_time)
        map.values(row0 + r, 3) = spec.times_tau[static_cast<size_t>(r)];
      if (spec.mode == RunMode::steady_state) map.values(row0 + r, 3) = inf_v;
    }

    try {
      const DrivenModel model = make_point_model(spec, res, fdc, fac, th);

      if (spec.mode == RunMode::isolated) {
        const FloquetBasis basis = floquet_states(model, spec.solver);
        int seen = k_max_used.load();
        while (basis.k_max > seen && !k_max_used.compare_exchange_weak(seen, basis.k_max)) {
        }
        const Vec psi0 = initial_state(model);
        map.values(row0, 2) = isolated_average(basis, model.projector_plus, psi0, spec.n_periods);
        return;
      }

      const BasisBundle bundle = build_basis(model, spec.solver, spec.max_tail_retries);
      {
        int seen = k_max_used.load();
        while (bundle.basis.k_max > seen && !k_max_used.compare_exchange_weak(seen, bundle.basis.k_max)) {
        }
      }
      const RateTensor rates = rate_tensor(bundle.basis, bundle.elems, spec.baths);
      const Generator gen = build_generator(bundle.basis, rates);

      switch (spec.mode) {
        case RunMode::finite_time: {
          const Vec psi0 = initial_state(model);
          const Mat rho0 = initial_density(bundle.basis, psi0);
          const Mat g = spec.period_average
                            ? floquet_projector_period_avg(bundle.basis, model.projector_plus)
                            : floquet_projector(bundle.basis, model.projector_plus);
          const Evolver ev(gen);
          for (int r = 0; r < rows_per_point; ++r) {
            const Mat rho = ev.evolve_to(rho0, spec.times_tau[static_cast<size_t>(r)] * tau);
            const double defect = positivity_defect(rho);
            map.values(row0 + r, 4) = population(g, rho);
            map.values(row0 + r, 5) = defect;
            map.values(row0 + r, 6) = (defect > 1e-3) ? flag_positivity : 0.0;
          }
          break;
        }
        case RunMode::steady_state: {
          const Mat g = spec.period_average
                            ? floquet_projector_period_avg(bundle.basis, model.projector_plus)
                            : floquet_projector(bundle.basis, model.projector_plus);
          try {
            const Mat rho = steady_state(gen);
            const double defect = positivity_defect(rho);
            map.values(row0, 4) = population(g, rho);
            map.values(row0, 5) = defect;
            map.values(row0, 6) = (defect > 1e-3) ? flag_positivity : 0.0;
          } catch (const SteadyStateError&) {
            map.values(row0, 6) = flag_nonunique_steady;
            n_failed.fetch_add(1);
          }
          break;
        }
        case RunMode::timescales: {
          const Timescales ts = timescales(gen);
          map.values(row0, 3) = ts.t_relax;
          map.values(row0, 4) = ts.t_dephase.value_or(nan_v);
          map.values(row0, 5) = ts.t_pure.value_or(nan_v);
          map.values(row0, 6) = ts.has_complex_pair ? 0.0 : flag_no_complex_pair;
          break;
        }
        case RunMode::rwa_compare: {
          const Timescales ts = timescales(gen);
          const double eps0 = 4.0 * pi * res.tls.i_p * fdc;
          const int n_res = (spec.resonance >= 0)
                                ? spec.resonance
                                : static_cast<int>(std::lround(eps0 / spec.omega0));
          const DressedParams dp = dressed_params(res.tls, fdc, fac, spec.omega0, n_res);
          const OhmicBath* bath = nullptr;
          for (const OhmicBath& b : spec.baths)
            if (b.tag == spec.couplings[0].bath_tag) bath = &b;
          const RwaRates rr = (spec.couplings[0].kind == CouplingKind::sigma_z)
                                  ? rates_longitudinal(dp, *bath, res.strengths[0])
                                  : rates_transverse(dp, *bath, res.strengths[0]);
          map.values(row0, 2) = n_res;
          map.values(row0, 3) = 1.0 / ts.t_relax;
          map.values(row0, 4) = ts.t_dephase ? 1.0 / *ts.t_dephase : nan_v;
          map.values(row0, 5) = rr.gamma_r;
          map.values(row0, 6) = rr.gamma_d;
          break;
        }
        case RunMode::isolated: break;  // handled above
      }
    } catch (const std::exception&) {
      n_failed.fetch_add(1);
      const int flag_col = (spec.mode == RunMode::finite_time || spec.mode == RunMode::steady_state ||
                            spec.mode == RunMode::timescales)
                               ? 6
                               : -1;
      if (flag_col >= 0)
        for (int r = 0; r < rows_per_point; ++r) map.values(row0 + r, flag_col) = flag_solver_failure;
    }
  };

  auto worker = [&]() {
    while (true) {
      const int ip = next.fetch_add(1);
      if (ip >= n_points) break;
      compute_point(ip);
    }
  };

  const int n_threads = std::max(1, std::min(spec.threads, n_points));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  map.metadata = {
      {"version", version_string},
      {"model_kind", spec.model_kind == ModelKind::tls ? "tls" : "multilevel"},
      {"mode", mode_name(spec.mode)},
      {"omega0", fmt_g(spec.omega0)},
      {"tau", fmt_g(tau)},
      {"f_omega", fmt_g(res.f_omega)},
      {"delta", fmt_g(res.tls.delta)},
      {"i_p", fmt_g(res.tls.i_p)},
      {"lambda_f", fmt_g(res.tls.lambda_f)},
      {"lambda_ch", fmt_g(res.tls.lambda_ch)},
      {"lambda_cc", fmt_g(res.tls.lambda_cc)},
      {"n_f_dc", std::to_string(n_fdc)},
      {"n_f_ac", std::to_string(n_fac)},
      {"n_theta", std::to_string(spec.theta.size())},
      {"n_rows", std::to_string(map.values.rows())},
      {"k_max_used", std::to_string(k_max_used.load())},
      {"n_failed_points", std::to_string(n_failed.load())},
  };
  return map;
}

double isolated_average(const DrivenModel& model, const FloquetSettings& solver, long n_periods) {
  const FloquetBasis basis = floquet_states(model, solver);
  const Vec psi0 = initial_state(model);
  return isolated_average(basis, model.projector_plus, psi0, n_periods);
}

double asymmetry_metric(const LzsMap& map, int n, double window, bool detrend) {
  if (!(window > 0.0)) throw std::invalid_argument("window must be > 0");
  if (!(map.f_omega > 0.0)) throw std::invalid_argument("map is missing the f_omega normalization");
  const int cf = map.column("f_dc");
  const int cp = map.column(map.mode == RunMode::isolated ? "p_plus_avg" : "p_plus");
  const int rows = static_cast<int>(map.values.rows());
  if (rows < 3) throw std::invalid_argument("scan too short for an asymmetry score");

  std::vector<double> f(static_cast<size_t>(rows)), p(static_cast<size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    f[static_cast<size_t>(i)] = map.values(i, cf);
    p[static_cast<size_t>(i)] = map.values(i, cp);
    if (i > 0 && !(f[static_cast<size_t>(i)] > f[static_cast<size_t>(i - 1)]))
      throw std::invalid_argument("scan must be a single ascending f_dc grid");
  }
  const double step = (f.back() - f.front()) / (rows - 1);
  for (int i = 1; i < rows; ++i)
    if (std::abs(f[static_cast<size_t>(i)] - f[static_cast<size_t>(i - 1)] - step) > 1e-9 * map.f_omega)
      throw std::invalid_argument("f_dc grid must be uniform");

  const double center = n * map.f_omega;
  int ic = -1;
  for (int i = 0; i < rows; ++i)
    if (std::abs(f[static_cast<size_t>(i)] - center) <= 1e-9 * map.f_omega) ic = i;
  if (ic < 0) throw std::invalid_argument("scan does not contain the resonance center point");
  const int kw = static_cast<int>(std::floor(window * map.f_omega / step + 1e-9));
  if (kw < 1) throw std::invalid_argument("window is smaller than the grid step");
  if (ic - kw < 0 || ic + kw >= rows) throw std::invalid_argument("window truncated by scan range");
  for (int i = ic - kw; i <= ic + kw; ++i)
    if (!std::isfinite(p[static_cast<size_t>(i)]))
      throw std::runtime_error("window contains flagged cells");

  const double base = 0.5 * (p[static_cast<size_t>(ic - kw)] + p[static_cast<size_t>(ic + kw)]);
  const double slope =
      detrend ? (p[static_cast<size_t>(ic + kw)] - p[static_cast<size_t>(ic - kw)]) / (2.0 * kw * step) : 0.0;
  double num = 0.0;
  double den = 0.0;
  for (int k = 1; k <= kw; ++k) {
    const double hi = p[static_cast<size_t>(ic + k)];
    const double lo = p[static_cast<size_t>(ic - k)];
    const double rp = hi - (base + slope * (k * step));
    const double rm = lo - (base - slope * (k * step));
    num += detrend ? (rp - rm) : (hi - lo);
    den += std::abs(rp) + std::abs(rm);
  }
  return (den > 0.0) ? num / den : 0.0;
}

}  // namespace lzs
