#include "lzs/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace lzs {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  size_t a = 0;
  size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool is_word(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
      return false;
  return true;
}

struct ValueRef {
  std::string text;
  int line = 0;
  int col = 0;
};

double parse_number(const ValueRef& v) {
  const std::string t = trim(v.text);
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(x))
    throw ConfigError("expected a finite number, got '" + t + "'", v.line, v.col);
  return x;
}

long parse_integer(const ValueRef& v) {
  const double x = parse_number(v);
  if (std::floor(x) != x || std::abs(x) > 1e15)
    throw ConfigError("expected an integer, got '" + trim(v.text) + "'", v.line, v.col);
  return static_cast<long>(x);
}

bool parse_bool(const ValueRef& v) {
  const std::string t = trim(v.text);
  if (t == "true") return true;
  if (t == "false") return false;
  throw ConfigError("expected true or false, got '" + t + "'", v.line, v.col);
}

std::vector<std::string> split_args(const std::string& inner) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : inner) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<double> parse_grid(const ValueRef& v) {
  const std::string t = trim(v.text);
  if (t.rfind("list(", 0) == 0) {
    if (t.back() != ')') throw ConfigError("expected ')' to close list(...)", v.line, v.col);
    std::vector<double> out;
    for (const std::string& part : split_args(t.substr(5, t.size() - 6)))
      out.push_back(parse_number({part, v.line, v.col}));
    return out;
  }
  if (t.rfind("linspace(", 0) == 0) {
    if (t.back() != ')') throw ConfigError("expected ')' to close linspace(...)", v.line, v.col);
    const std::vector<std::string> parts = split_args(t.substr(9, t.size() - 10));
    if (parts.size() != 3)
      throw ConfigError("linspace takes exactly (first, last, count)", v.line, v.col);
    const double a = parse_number({parts[0], v.line, v.col});
    const double b = parse_number({parts[1], v.line, v.col});
    const long n = parse_integer({parts[2], v.line, v.col});
    if (n < 1 || n > 10000000) throw ConfigError("linspace count must be in [1, 1e7]", v.line, v.col);
    std::vector<double> out(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i)
      out[static_cast<size_t>(i)] = (n == 1) ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
  }
  return {parse_number(v)};
}

struct Section {
  std::string kind;   // device, drive, bath, coupling, run
  std::string name;   // tag for bath/coupling
  int line = 0;
  std::map<std::string, ValueRef> entries;
  std::vector<std::string> order;
};

RunMode parse_mode_word(const ValueRef& v) {
  const std::string t = trim(v.text);
  if (t == "finite_time") return RunMode::finite_time;
  if (t == "steady_state") return RunMode::steady_state;
  if (t == "timescales") return RunMode::timescales;
  if (t == "rwa_compare") return RunMode::rwa_compare;
  if (t == "isolated") return RunMode::isolated;
  throw ConfigError("unknown mode '" + t +
                        "' (expected finite_time, steady_state, timescales, rwa_compare, isolated)",
                    v.line, v.col);
}

CouplingKind parse_kind_word(const ValueRef& v) {
  const std::string t = trim(v.text);
  if (t == "sigma_z") return CouplingKind::sigma_z;
  if (t == "sigma_y") return CouplingKind::sigma_y;
  if (t == "sigma_x") return CouplingKind::sigma_x;
  if (t == "mixed") return CouplingKind::mixed;
  if (t == "flux") return CouplingKind::flux;
  if (t == "charge") return CouplingKind::charge;
  throw ConfigError("unknown coupling kind '" + t +
                        "' (expected sigma_z, sigma_y, sigma_x, mixed, flux, charge)",
                    v.line, v.col);
}

// pops a key from the section if present
const ValueRef* take(Section& s, const std::string& key) {
  auto it = s.entries.find(key);
  return (it == s.entries.end()) ? nullptr : &it->second;
}

void check_no_leftovers(const Section& s, const std::vector<std::string>& known) {
  for (const std::string& key : s.order) {
    bool ok = false;
    for (const std::string& k : known) ok = ok || k == key;
    if (!ok) {
      const ValueRef& v = s.entries.at(key);
      throw ConfigError("unknown key '" + key + "' in [" + s.kind +
                            (s.name.empty() ? "" : " " + s.name) + "]",
                        v.line, 1);
    }
  }
}

}  // namespace

ConfigError::ConfigError(const std::string& msg, int line_, int col_)
    : std::runtime_error("config error at line " + std::to_string(line_) + ", column " +
                         std::to_string(col_) + ": " + msg),
      line(line_),
      col(col_) {}

const char* run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::finite_time: return "finite_time";
    case RunMode::steady_state: return "steady_state";
    case RunMode::timescales: return "timescales";
    case RunMode::rwa_compare: return "rwa_compare";
    case RunMode::isolated: return "isolated";
  }
  return "?";
}

const char* coupling_kind_name(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::sigma_z: return "sigma_z";
    case CouplingKind::sigma_y: return "sigma_y";
    case CouplingKind::sigma_x: return "sigma_x";
    case CouplingKind::mixed: return "mixed";
    case CouplingKind::flux: return "flux";
    case CouplingKind::charge: return "charge";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  std::vector<Section> sections;
  Section* current = nullptr;

  int line_no = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;

    const int col0 = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("expected ']' to close the section header", line_no, col0);
      const std::string inner = trim(body.substr(1, body.size() - 2));
      const size_t sp = inner.find_first_of(" \t");
      Section s;
      s.kind = (sp == std::string::npos) ? inner : trim(inner.substr(0, sp));
      s.name = (sp == std::string::npos) ? "" : trim(inner.substr(sp));
      s.line = line_no;
      if (s.kind != "device" && s.kind != "drive" && s.kind != "bath" && s.kind != "coupling" &&
          s.kind != "run")
        throw ConfigError("unknown section [" + inner + "]", line_no, col0);
      if ((s.kind == "bath" || s.kind == "coupling") && !is_word(s.name))
        throw ConfigError("[" + s.kind + "] needs a name, e.g. [" + s.kind + " main]", line_no, col0);
      if ((s.kind == "device" || s.kind == "drive" || s.kind == "run") && !s.name.empty())
        throw ConfigError("[" + s.kind + "] does not take a name", line_no, col0);
      for (const Section& prev : sections) {
        if (prev.kind == s.kind && prev.name == s.name)
          throw ConfigError("duplicate section [" + inner + "]", line_no, col0);
      }
      sections.push_back(s);
      current = &sections.back();
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line_no, col0);
    if (current == nullptr)
      throw ConfigError("key outside of any [section]", line_no, col0);
    const std::string key = trim(line.substr(0, eq));
    if (!is_word(key)) throw ConfigError("invalid key '" + key + "'", line_no, col0);
    if (current->entries.count(key))
      throw ConfigError("duplicate key '" + key + "'", line_no, col0);
    ValueRef v;
    v.text = trim(line.substr(eq + 1));
    v.line = line_no;
    v.col = static_cast<int>(eq) + 2;
    if (v.text.empty()) throw ConfigError("missing value for key '" + key + "'", line_no, v.col);
    current->entries[key] = v;
    current->order.push_back(key);
  }

  if (sections.empty())
    throw ConfigError("config is empty; required keys: [run] mode (all other keys have defaults)", 1, 1);

  RunConfig cfg;
  SweepSpec& spec = cfg.spec;
  bool saw_run = false;
  bool saw_mode = false;

  for (Section& s : sections) {
    if (s.kind == "device") {
      if (const ValueRef* v = take(s, "kind")) {
        const std::string t = trim(v->text);
        if (t == "tls")
          spec.model_kind = ModelKind::tls;
        else if (t == "multilevel")
          spec.model_kind = ModelKind::multilevel;
        else
          throw ConfigError("unknown device kind '" + t + "' (expected tls or multilevel)", v->line, v->col);
      }
      if (const ValueRef* v = take(s, "alpha")) spec.device.alpha = parse_number(*v);
      if (const ValueRef* v = take(s, "eta")) spec.device.eta = parse_number(*v);
      if (const ValueRef* v = take(s, "n_charge")) spec.device.n_charge = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "levels")) spec.levels = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "derive")) spec.derive_tls = parse_bool(*v);
      if (const ValueRef* v = take(s, "delta")) spec.tls.delta = parse_number(*v);
      if (const ValueRef* v = take(s, "i_p")) spec.tls.i_p = parse_number(*v);
      if (const ValueRef* v = take(s, "lambda_f")) spec.tls.lambda_f = parse_number(*v);
      if (const ValueRef* v = take(s, "lambda_ch")) spec.tls.lambda_ch = parse_number(*v);
      if (const ValueRef* v = take(s, "lambda_cc")) spec.tls.lambda_cc = parse_number(*v);
      check_no_leftovers(s, {"kind", "alpha", "eta", "n_charge", "levels", "derive", "delta", "i_p",
                             "lambda_f", "lambda_ch", "lambda_cc"});
      if (!spec.derive_tls && spec.model_kind == ModelKind::tls &&
          (!(spec.tls.delta > 0.0) || !(spec.tls.i_p > 0.0)))
        throw ConfigError("derive = false requires positive delta and i_p", s.line, 1);
    } else if (s.kind == "drive") {
      if (const ValueRef* v = take(s, "omega0")) spec.omega0 = parse_number(*v);
      if (const ValueRef* v = take(s, "f_dc")) spec.f_dc = parse_grid(*v);
      if (const ValueRef* v = take(s, "f_ac")) spec.f_ac = parse_grid(*v);
      if (const ValueRef* v = take(s, "theta")) spec.theta = parse_grid(*v);
      check_no_leftovers(s, {"omega0", "f_dc", "f_ac", "theta"});
    } else if (s.kind == "bath") {
      OhmicBath b;
      b.tag = s.name;
      if (const ValueRef* v = take(s, "gamma")) b.gamma = parse_number(*v);
      if (const ValueRef* v = take(s, "omega_c")) b.omega_c = parse_number(*v);
      if (const ValueRef* v = take(s, "temperature")) b.temperature = parse_number(*v);
      check_no_leftovers(s, {"gamma", "omega_c", "temperature"});
      spec.baths.push_back(b);
    } else if (s.kind == "coupling") {
      CouplingSpec c;
      c.name = s.name;
      const ValueRef* vb = take(s, "bath");
      if (vb == nullptr) throw ConfigError("[coupling " + s.name + "] needs a bath key", s.line, 1);
      c.bath_tag = trim(vb->text);
      const ValueRef* vk = take(s, "kind");
      if (vk == nullptr) throw ConfigError("[coupling " + s.name + "] needs a kind key", s.line, 1);
      c.kind = parse_kind_word(*vk);
      if (const ValueRef* v = take(s, "strength")) {
        if (trim(v->text) == "derive") {
          c.derive_strength = true;
          c.strength = 1.0;
        } else {
          c.strength = parse_number(*v);
          c.derive_strength = false;
        }
      }
      check_no_leftovers(s, {"bath", "kind", "strength"});
      spec.couplings.push_back(c);
    } else {  // run
      saw_run = true;
      if (const ValueRef* v = take(s, "mode")) {
        spec.mode = parse_mode_word(*v);
        saw_mode = true;
      }
      if (const ValueRef* v = take(s, "times_tau")) spec.times_tau = parse_grid(*v);
      if (const ValueRef* v = take(s, "period_average")) spec.period_average = parse_bool(*v);
      if (const ValueRef* v = take(s, "n_periods")) spec.n_periods = parse_integer(*v);
      if (const ValueRef* v = take(s, "resonance")) spec.resonance = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "threads")) spec.threads = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "n_steps")) spec.solver.n_steps = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "n_time")) spec.solver.n_time = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "k_min")) spec.solver.k_min = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "k_max")) spec.solver.k_max_override = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "max_tail_retries"))
        spec.max_tail_retries = static_cast<int>(parse_integer(*v));
      if (const ValueRef* v = take(s, "output")) cfg.output = trim(v->text);
      check_no_leftovers(s, {"mode", "times_tau", "period_average", "n_periods", "resonance",
                             "threads", "n_steps", "n_time", "k_min", "k_max", "max_tail_retries",
                             "output"});
    }
  }

  if (!saw_run || !saw_mode)
    throw ConfigError("missing required key: [run] mode", line_no > 0 ? line_no : 1, 1);

  spec.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string grid_text(const std::vector<double>& g) {
  if (g.size() == 1) return fmt_g(g[0]);
  std::string out = "list(";
  for (size_t i = 0; i < g.size(); ++i) {
    if (i) out += ", ";
    out += fmt_g(g[i]);
  }
  out += ")";
  return out;
}

}  // namespace

std::string serialize_config(const RunConfig& config) {
  const SweepSpec& s = config.spec;
  std::ostringstream out;
  out << "[device]\n";
  out << "kind = " << (s.model_kind == ModelKind::tls ? "tls" : "multilevel") << "\n";
  out << "alpha = " << fmt_g(s.device.alpha) << "\n";
  out << "eta = " << fmt_g(s.device.eta) << "\n";
  out << "n_charge = " << s.device.n_charge << "\n";
  out << "levels = " << s.levels << "\n";
  out << "derive = " << (s.derive_tls ? "true" : "false") << "\n";
  if (!s.derive_tls && s.model_kind == ModelKind::tls) {
    out << "delta = " << fmt_g(s.tls.delta) << "\n";
    out << "i_p = " << fmt_g(s.tls.i_p) << "\n";
    out << "lambda_f = " << fmt_g(s.tls.lambda_f) << "\n";
    out << "lambda_ch = " << fmt_g(s.tls.lambda_ch) << "\n";
    out << "lambda_cc = " << fmt_g(s.tls.lambda_cc) << "\n";
  }
  out << "\n[drive]\n";
  out << "omega0 = " << fmt_g(s.omega0) << "\n";
  out << "f_dc = " << grid_text(s.f_dc) << "\n";
  out << "f_ac = " << grid_text(s.f_ac) << "\n";
  if (!s.theta.empty()) out << "theta = " << grid_text(s.theta) << "\n";
  for (const OhmicBath& b : s.baths) {
    out << "\n[bath " << b.tag << "]\n";
    out << "gamma = " << fmt_g(b.gamma) << "\n";
    out << "omega_c = " << fmt_g(b.omega_c) << "\n";
    out << "temperature = " << fmt_g(b.temperature) << "\n";
  }
  for (const CouplingSpec& c : s.couplings) {
    out << "\n[coupling " << c.name << "]\n";
    out << "bath = " << c.bath_tag << "\n";
    out << "kind = " << coupling_kind_name(c.kind) << "\n";
    out << "strength = " << (c.derive_strength ? std::string("derive") : fmt_g(c.strength)) << "\n";
  }
  out << "\n[run]\n";
  out << "mode = " << run_mode_name(s.mode) << "\n";
  out << "times_tau = " << grid_text(s.times_tau) << "\n";
  out << "period_average = " << (s.period_average ? "true" : "false") << "\n";
  out << "n_periods = " << s.n_periods << "\n";
  out << "resonance = " << s.resonance << "\n";
  out << "threads = " << s.threads << "\n";
  out << "n_steps = " << s.solver.n_steps << "\n";
  out << "n_time = " << s.solver.n_time << "\n";
  out << "k_min = " << s.solver.k_min << "\n";
  out << "k_max = " << s.solver.k_max_override << "\n";
  out << "max_tail_retries = " << s.max_tail_retries << "\n";
  if (!config.output.empty()) out << "output = " << config.output << "\n";
  return out.str();
}

namespace {

bool eq(const FqParams& a, const FqParams& b) {
  return a.alpha == b.alpha && a.eta == b.eta && a.f_dc == b.f_dc && a.n_charge == b.n_charge;
}

bool eq(const TlsParams& a, const TlsParams& b) {
  return a.delta == b.delta && a.i_p == b.i_p && a.lambda_f == b.lambda_f &&
         a.lambda_ch == b.lambda_ch && a.lambda_cc == b.lambda_cc && a.lambda_ch_p == b.lambda_ch_p;
}

bool eq(const OhmicBath& a, const OhmicBath& b) {
  return a.tag == b.tag && a.gamma == b.gamma && a.omega_c == b.omega_c &&
         a.temperature == b.temperature;
}

bool eq(const CouplingSpec& a, const CouplingSpec& b) {
  return a.name == b.name && a.bath_tag == b.bath_tag && a.kind == b.kind &&
         a.strength == b.strength && a.derive_strength == b.derive_strength;
}

bool eq(const FloquetSettings& a, const FloquetSettings& b) {
  return a.n_steps == b.n_steps && a.n_time == b.n_time && a.k_min == b.k_min &&
         a.k_max_override == b.k_max_override;
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
  const SweepSpec& x = a.spec;
  const SweepSpec& y = b.spec;
  if (!(x.model_kind == y.model_kind && x.mode == y.mode && eq(x.device, y.device) &&
        x.levels == y.levels && x.derive_tls == y.derive_tls && eq(x.tls, y.tls) &&
        x.omega0 == y.omega0 && x.f_dc == y.f_dc && x.f_ac == y.f_ac && x.theta == y.theta &&
        x.times_tau == y.times_tau && x.period_average == y.period_average &&
        x.n_periods == y.n_periods && x.resonance == y.resonance && eq(x.solver, y.solver) &&
        x.max_tail_retries == y.max_tail_retries && x.threads == y.threads))
    return false;
  if (x.baths.size() != y.baths.size() || x.couplings.size() != y.couplings.size()) return false;
  for (size_t i = 0; i < x.baths.size(); ++i)
    if (!eq(x.baths[i], y.baths[i])) return false;
  for (size_t i = 0; i < x.couplings.size(); ++i)
    if (!eq(x.couplings[i], y.couplings[i])) return false;
  return a.output == b.output;
}

}  // namespace lzs
