#include "cli.hpp"

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lzs/config.hpp"
#include "lzs/output.hpp"
#include "lzs/sweep.hpp"

namespace {

struct ModeCommand {
  lzs::RunMode mode;
  CLI::App* app = nullptr;
  std::string config_path;
  std::string output_path;
  int threads = 0;  // 0 keeps the config value
};

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Interference maps of a driven flux qubit with dissipation"};
  app.require_subcommand(1);

  std::vector<ModeCommand> commands;
  commands.reserve(5);
  const std::pair<const char*, lzs::RunMode> modes[] = {
      {"finite_time", lzs::RunMode::finite_time}, {"steady_state", lzs::RunMode::steady_state},
      {"timescales", lzs::RunMode::timescales},   {"rwa_compare", lzs::RunMode::rwa_compare},
      {"isolated", lzs::RunMode::isolated},
  };
  for (const auto& [name, mode] : modes) {
    commands.push_back({mode});
    ModeCommand& cmd = commands.back();
    cmd.app = app.add_subcommand(name, std::string("run in ") + name + " mode");
    cmd.app->add_option("--config", cmd.config_path, "path to the run configuration")
        ->required();
    cmd.app->add_option("--output", cmd.output_path, "values file path (default: from config)");
    cmd.app->add_option("--threads", cmd.threads, "worker thread count override")
        ->check(CLI::PositiveNumber);
    // no randomness anywhere; reserved flag, rejects any attached value
    cmd.app->add_flag("--seedless", "accepted for interface compatibility; no effect")
        ->disable_flag_override();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const ModeCommand* active = nullptr;
  for (const ModeCommand& cmd : commands)
    if (cmd.app->parsed()) active = &cmd;
  if (active == nullptr) {
    std::cerr << "error: no mode selected\n";
    return 1;
  }

  lzs::RunConfig config;
  try {
    config = lzs::parse_config_file(active->config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (config.spec.mode != active->mode) {
    std::cerr << "error: config sets mode = " << lzs::run_mode_name(config.spec.mode)
              << " but the command line selected " << lzs::run_mode_name(active->mode) << "\n";
    return 1;
  }
  if (active->threads > 0) config.spec.threads = active->threads;
  if (!active->output_path.empty()) config.output = active->output_path;
  if (config.output.empty())
    config.output = std::string("lzs_") + lzs::run_mode_name(active->mode) + ".csv";

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const lzs::LzsMap map = lzs::run_sweep(config.spec);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    lzs::write_text_atomic(config.output, lzs::csv_to_string(map));
    const std::string meta_path = lzs::meta_path_for(config.output);
    lzs::write_text_atomic(meta_path, lzs::meta_to_string(config, map, wall));
    std::cout << "wrote " << map.values.rows() << " rows to " << config.output << " (metadata: "
              << meta_path << ")\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
