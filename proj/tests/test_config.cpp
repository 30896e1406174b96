#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzs/config.hpp"
#include "test_common.hpp"

using lzs::ConfigError;
using lzs::CouplingKind;
using lzs::ModelKind;
using lzs::RunConfig;
using lzs::RunMode;

namespace {

// two-level run exercising every optional block: explicit device parameters,
// a theta grid with a mixed coupling, two baths, a derived strength, and an
// output path
RunConfig reference_config_tls() {
  RunConfig cfg;
  lzs::SweepSpec& s = cfg.spec;
  s.model_kind = ModelKind::tls;
  s.mode = RunMode::steady_state;
  s.derive_tls = false;
  s.tls = testutil::reference_tls();
  s.omega0 = 0.003;
  s.f_dc = {0.0, 6.625e-4, 1.325e-3};
  s.f_ac = {0.003};
  s.theta = {0.0, 0.3, 0.7853981633974483};
  lzs::OhmicBath flux = testutil::reference_bath();
  flux.tag = "flux";
  lzs::OhmicBath charge = testutil::reference_bath();
  charge.tag = "charge";
  charge.temperature = 0.002;
  s.baths = {flux, charge};
  s.couplings.push_back({"main", "flux", CouplingKind::sigma_z, 1.0, true});
  s.couplings.push_back({"mix", "charge", CouplingKind::mixed, 0.25, false});
  s.times_tau = {0.0, 1000.0};
  s.period_average = true;
  s.n_periods = 400;
  s.resonance = 4;
  s.solver.n_steps = 2048;
  s.solver.n_time = 8192;
  s.solver.k_min = 48;
  s.solver.k_max_override = 64;
  s.max_tail_retries = 2;
  s.threads = 3;
  cfg.output = "maps/scan.csv";
  return cfg;
}

// multilevel run with junction couplings and derived two-level parameters
RunConfig reference_config_multilevel() {
  RunConfig cfg;
  lzs::SweepSpec& s = cfg.spec;
  s.model_kind = ModelKind::multilevel;
  s.mode = RunMode::timescales;
  s.levels = 5;
  s.device.alpha = 0.82;
  s.device.eta = 0.3;
  s.device.n_charge = 6;
  s.omega0 = 0.004;
  s.f_dc = {0.002};
  s.f_ac = {0.001, 0.002};
  lzs::OhmicBath env = testutil::reference_bath();
  env.tag = "env";
  s.baths = {env};
  s.couplings.push_back({"fl", "env", CouplingKind::flux, 1.0, false});
  s.couplings.push_back({"ch", "env", CouplingKind::charge, 0.5, false});
  s.times_tau = {500.0};
  return cfg;
}

void check_config_error(const std::string& text, int line, int col, const std::string& msg) {
  const std::string what = "config error at line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + msg;
  try {
    lzs::parse_config(text);
    FAIL("expected a ConfigError for:\n" << text);
  } catch (const ConfigError& e) {
    CHECK(e.line == line);
    CHECK(e.col == col);
    CHECK(std::string(e.what()) == what);
  }
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("serialized configs parse back to an equal value") {
    for (const RunConfig& a : {reference_config_tls(), reference_config_multilevel()}) {
      const std::string s1 = lzs::serialize_config(a);
      const RunConfig b = lzs::parse_config(s1);
      CHECK(b == a);
      CHECK(lzs::serialize_config(b) == s1);
    }
  }

  TEST_CASE("canonical form spells out the optional blocks it needs") {
    const std::string text = lzs::serialize_config(reference_config_tls());
    CHECK(text.find("strength = derive\n") != std::string::npos);
    CHECK(text.find("kind = mixed\n") != std::string::npos);
    CHECK(text.find("theta = list(") != std::string::npos);
    CHECK(text.find("mode = steady_state\n") != std::string::npos);
    CHECK(text.find("[bath flux]") != std::string::npos);
    CHECK(text.find("[bath charge]") != std::string::npos);
    CHECK(text.find("output = maps/scan.csv\n") != std::string::npos);
    CHECK(text.find("derive = false\n") != std::string::npos);
    CHECK(text.find("delta = ") != std::string::npos);
  }

  TEST_CASE("defaults cover everything except the run mode") {
    const RunConfig cfg = lzs::parse_config("[run]\nmode = isolated\n");
    const lzs::SweepSpec& s = cfg.spec;
    CHECK(s.mode == RunMode::isolated);
    CHECK(s.model_kind == ModelKind::tls);
    CHECK(s.derive_tls == true);
    CHECK(s.levels == 4);
    CHECK(s.device.alpha == 0.8);
    CHECK(s.device.eta == 0.25);
    CHECK(s.device.n_charge == 10);
    CHECK(s.omega0 == 0.003);
    CHECK(s.f_dc == std::vector<double>{0.0});
    CHECK(s.f_ac == std::vector<double>{0.003});
    CHECK(s.theta.empty());
    CHECK(s.baths.empty());
    CHECK(s.couplings.empty());
    CHECK(s.times_tau == std::vector<double>{1000.0});
    CHECK(s.period_average == false);
    CHECK(s.n_periods == 1000);
    CHECK(s.resonance == -1);
    CHECK(s.solver.n_steps == 4096);
    CHECK(s.solver.n_time == 4096);
    CHECK(s.solver.k_min == 32);
    CHECK(s.solver.k_max_override == 0);
    CHECK(s.max_tail_retries == 3);
    CHECK(s.threads == 1);
    CHECK(cfg.output.empty());

    // defaulted optional blocks stay out of the canonical form
    const std::string text = lzs::serialize_config(cfg);
    CHECK(text.find("f_dc = 0\n") != std::string::npos);
    CHECK(text.find("derive = true\n") != std::string::npos);
    CHECK(text.find("delta = ") == std::string::npos);
    CHECK(text.find("theta") == std::string::npos);
    CHECK(text.find("output") == std::string::npos);
    CHECK(lzs::serialize_config(lzs::parse_config(text)) == text);
  }

  TEST_CASE("grids accept plain numbers, list(...), and linspace(...)") {
    const RunConfig cfg = lzs::parse_config(
        "[drive]\n"
        "f_dc = list(0, 1e-3, -2.5e-3)\n"
        "f_ac = linspace(0, 0.01, 5)\n"
        "\n"
        "[run]\n"
        "mode = isolated\n"
        "times_tau = 250\n");
    CHECK((cfg.spec.f_dc == std::vector<double>{0.0, 1e-3, -2.5e-3}));
    std::vector<double> lin(5);
    for (int i = 0; i < 5; ++i) lin[i] = 0.0 + (0.01 - 0.0) * i / 4.0;
    CHECK(cfg.spec.f_ac == lin);
    CHECK(cfg.spec.times_tau == std::vector<double>{250.0});

    const RunConfig single = lzs::parse_config(
        "[drive]\nf_ac = linspace(0.25, 0.9, 1)\n\n[run]\nmode = isolated\n");
    CHECK(single.spec.f_ac == std::vector<double>{0.25});
  }

  TEST_CASE("comments, indentation, and CRLF endings are tolerated") {
    const std::string text =
        "# scan configuration\r\n"
        "  [run]   # indented header\r\n"
        "  mode = isolated   # trailing comment\r\n"
        "\r\n"
        "  n_periods = 250\r\n";
    const RunConfig cfg = lzs::parse_config(text);
    CHECK(cfg.spec.mode == RunMode::isolated);
    CHECK(cfg.spec.n_periods == 250);
  }

  TEST_CASE("strength = derive marks the coupling for device-derived magnitudes") {
    const RunConfig cfg = lzs::parse_config(
        "[bath b]\n"
        "\n"
        "[coupling c]\n"
        "bath = b\n"
        "kind = sigma_z\n"
        "strength = derive\n"
        "\n"
        "[run]\n"
        "mode = timescales\n");
    REQUIRE(cfg.spec.couplings.size() == 1);
    CHECK(cfg.spec.couplings[0].derive_strength == true);
    CHECK(cfg.spec.couplings[0].strength == 1.0);
    CHECK(cfg.spec.couplings[0].bath_tag == "b");
  }

  TEST_CASE("parse errors carry one-based line and column positions") {
    check_config_error("", 1, 1,
                       "config is empty; required keys: [run] mode (all other keys have defaults)");
    check_config_error("# nothing but a comment\n \n", 1, 1,
                       "config is empty; required keys: [run] mode (all other keys have defaults)");
    check_config_error("[run]\nthreads = 2\n", 2, 1, "missing required key: [run] mode");
    check_config_error("[drive]\nomega0 = 0.004\n", 2, 1, "missing required key: [run] mode");
    check_config_error("[drive]\nomega0 = fast\n", 2, 9, "expected a finite number, got 'fast'");
    check_config_error("[run]\nmode = isolated\nn_periods = 2.5\n", 3, 12,
                       "expected an integer, got '2.5'");
    check_config_error("[run]\nmode = isolated\nthreads = 1e16\n", 3, 10,
                       "expected an integer, got '1e16'");
    check_config_error("[run]\nmode = isolated\nperiod_average = maybe\n", 3, 17,
                       "expected true or false, got 'maybe'");
  }

  TEST_CASE("section and key shape errors are reported in place") {
    check_config_error("[warp]\n", 1, 1, "unknown section [warp]");
    check_config_error("[bath]\n", 1, 1, "[bath] needs a name, e.g. [bath main]");
    check_config_error("[coupling]\n", 1, 1, "[coupling] needs a name, e.g. [coupling main]");
    check_config_error("[run silly]\nmode = isolated\n", 1, 1, "[run] does not take a name");
    check_config_error("[drive\nomega0 = 0.003\n", 1, 1, "expected ']' to close the section header");
    check_config_error("omega0 = 0.003\n", 1, 1, "key outside of any [section]");
    check_config_error("[run]\nmode isolated\n", 2, 1, "expected key = value");
    check_config_error("[run]\nmode =\n", 2, 7, "missing value for key 'mode'");
    check_config_error("[run]\nmo de = isolated\n", 2, 1, "invalid key 'mo de'");
    check_config_error("[drive]\nzeta = 1\n\n[run]\nmode = isolated\n", 2, 1,
                       "unknown key 'zeta' in [drive]");
    check_config_error("[bath main]\nviscosity = 2\n\n[run]\nmode = isolated\n", 2, 1,
                       "unknown key 'viscosity' in [bath main]");
    check_config_error("[drive]\nomega0 = 0.003\n\n[drive]\nf_ac = 0.001\n", 4, 1,
                       "duplicate section [drive]");
    check_config_error("[run]\nmode = isolated\nmode = isolated\n", 3, 1, "duplicate key 'mode'");
  }

  TEST_CASE("enumerated words are validated with the allowed set in the message") {
    check_config_error(
        "[run]\nmode = warp\n", 2, 7,
        "unknown mode 'warp' (expected finite_time, steady_state, timescales, rwa_compare, isolated)");
    check_config_error(
        "[bath b]\n\n[coupling c]\nbath = b\nkind = sigma_q\n\n[run]\nmode = timescales\n", 5, 7,
        "unknown coupling kind 'sigma_q' (expected sigma_z, sigma_y, sigma_x, mixed, flux, charge)");
    check_config_error("[device]\nkind = qutrit\n\n[run]\nmode = isolated\n", 2, 7,
                       "unknown device kind 'qutrit' (expected tls or multilevel)");
  }

  TEST_CASE("coupling sections demand their bath and kind keys") {
    check_config_error("[bath b]\n\n[coupling c]\nkind = sigma_z\n\n[run]\nmode = timescales\n", 3,
                       1, "[coupling c] needs a bath key");
    check_config_error("[bath b]\n\n[coupling c]\nbath = b\n\n[run]\nmode = timescales\n", 3, 1,
                       "[coupling c] needs a kind key");
  }

  TEST_CASE("explicit device parameters must be positive when derivation is off") {
    check_config_error("[device]\nderive = false\n\n[run]\nmode = isolated\n", 1, 1,
                       "derive = false requires positive delta and i_p");
  }

  TEST_CASE("grid syntax errors name the offending form") {
    check_config_error("[drive]\nf_ac = linspace(0, 1)\n\n[run]\nmode = isolated\n", 2, 7,
                       "linspace takes exactly (first, last, count)");
    check_config_error("[drive]\nf_ac = linspace(0, 1, 0)\n\n[run]\nmode = isolated\n", 2, 7,
                       "linspace count must be in [1, 1e7]");
    check_config_error("[drive]\nf_ac = linspace(0, 1, 10000001)\n\n[run]\nmode = isolated\n", 2, 7,
                       "linspace count must be in [1, 1e7]");
    check_config_error("[drive]\nf_dc = list(1, 2\n\n[run]\nmode = isolated\n", 2, 7,
                       "expected ')' to close list(...)");
    check_config_error("[drive]\nf_ac = linspace(0, 1, 5\n\n[run]\nmode = isolated\n", 2, 7,
                       "expected ')' to close linspace(...)");
  }

  TEST_CASE("semantic validation failures surface as invalid_argument") {
    CHECK_THROWS_WITH_AS(lzs::parse_config("[run]\nmode = steady_state\n"),
                         "dissipative modes need at least one coupling", std::invalid_argument);
    CHECK_THROWS_WITH_AS(lzs::parse_config("[drive]\nomega0 = 0\n\n[run]\nmode = isolated\n"),
                         "omega0 must be > 0", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        lzs::parse_config("[bath b]\ngamma = -1\n\n[coupling c]\nbath = b\nkind = sigma_z\n\n"
                          "[run]\nmode = timescales\n"),
        "gamma must be >= 0", std::invalid_argument);
  }

  TEST_CASE("config files parse like in-memory text") {
    namespace fs = std::filesystem;
    const RunConfig a = reference_config_tls();
    const std::string text = lzs::serialize_config(a);
    const fs::path dir = fs::temp_directory_path() / "lzs_config_suite";
    fs::create_directories(dir);
    const fs::path path = dir / "roundtrip.cfg";
    {
      std::ofstream out(path);
      out << text;
    }
    CHECK(lzs::parse_config_file(path.string()) == a);

    const std::string absent = (dir / "absent.cfg").string();
    const std::string msg = "cannot open config file: " + absent;
    CHECK_THROWS_WITH_AS(lzs::parse_config_file(absent), msg.c_str(), std::runtime_error);
    fs::remove_all(dir);
  }

  TEST_CASE("mode and coupling kind names round-trip through their words") {
    CHECK(std::string(lzs::run_mode_name(RunMode::finite_time)) == "finite_time");
    CHECK(std::string(lzs::run_mode_name(RunMode::steady_state)) == "steady_state");
    CHECK(std::string(lzs::run_mode_name(RunMode::timescales)) == "timescales");
    CHECK(std::string(lzs::run_mode_name(RunMode::rwa_compare)) == "rwa_compare");
    CHECK(std::string(lzs::run_mode_name(RunMode::isolated)) == "isolated");
    CHECK(std::string(lzs::coupling_kind_name(CouplingKind::sigma_z)) == "sigma_z");
    CHECK(std::string(lzs::coupling_kind_name(CouplingKind::sigma_y)) == "sigma_y");
    CHECK(std::string(lzs::coupling_kind_name(CouplingKind::sigma_x)) == "sigma_x");
    CHECK(std::string(lzs::coupling_kind_name(CouplingKind::mixed)) == "mixed");
    CHECK(std::string(lzs::coupling_kind_name(CouplingKind::flux)) == "flux");
    CHECK(std::string(lzs::coupling_kind_name(CouplingKind::charge)) == "charge");
  }
}
