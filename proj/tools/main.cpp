#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

using namespace haptiguide;
using namespace haptiguide::cli;

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop haptic postural guidance simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string input;
  std::string device = "ergotac";
  std::string comparison;
  std::optional<double> shoulder_target;
  std::optional<double> knee_target;

  auto* simulate = app.add_subcommand("simulate", "Run simulated sessions for every configured subject");
  simulate->add_option("--config", config_path, "Session configuration (JSON)")->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Protocol seed (overrides the config)");
  simulate->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* replay = app.add_subcommand("replay", "Evaluate device cues and metrics on a recorded trajectory");
  replay->add_option("--input", input, "Motion capture CSV (t_seconds,shoulder_deg,knee_deg)")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--device", device, "Device whose feedback law is evaluated")
      ->check(CLI::IsMember({"ergotac", "cuff"}));
  replay->add_option("--shoulder-target", shoulder_target, "Shoulder target angle (deg)");
  replay->add_option("--knee-target", knee_target, "Knee target angle (deg)");
  replay->add_option("--config", config_path, "Device and declaration parameters (JSON)")
      ->check(CLI::ExistingFile);
  replay->add_option("--out", out_dir, "Output directory")->default_val("replay_out");

  auto* metrics = app.add_subcommand("metrics", "Recompute per-trial metrics from trial logs");
  metrics->add_option("--input", input, "Directory of trial logs")->required()->check(CLI::ExistingDirectory);
  metrics->add_option("--out", out_dir, "Output directory")->default_val("metrics_out");

  auto* compare = app.add_subcommand("compare", "Wilcoxon signed-rank comparisons from a metrics CSV");
  compare->add_option("--input", input, "metrics.csv")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", out_dir, "Output directory")->default_val("compare_out");

  auto* report = app.add_subcommand("report", "Boxplot SVGs with significance annotations");
  report->add_option("--input", input, "metrics.csv")->required()->check(CLI::ExistingFile);
  report->add_option("--comparison", comparison, "comparison.csv (computed when omitted)")
      ->check(CLI::ExistingFile);
  report->add_option("--out", out_dir, "Output directory")->default_val("report_out");

  CLI11_PARSE(app, argc, argv);

  try {
    SessionConfig config = config_path.empty() ? default_config() : load_config(config_path);
    if (seed) config.protocol_seed = *seed;

    if (simulate->parsed()) {
      return cmd_simulate(config, out_dir.empty() ? std::filesystem::path(config.output_dir) : std::filesystem::path(out_dir), std::cout);
    }
    if (replay->parsed()) {
      if (!shoulder_target && !knee_target) {
        std::cerr << "error: replay needs --shoulder-target and/or --knee-target\n";
        return 2;
      }
      return cmd_replay(input, device_from_string(device), TargetPose(shoulder_target, knee_target),
                        config, out_dir, std::cout);
    }
    if (metrics->parsed()) return cmd_metrics(input, out_dir, std::cout);
    if (compare->parsed()) return cmd_compare(input, out_dir, std::cout);
    if (report->parsed()) {
      return cmd_report(input, comparison.empty() ? std::nullopt : std::optional<std::filesystem::path>(comparison),
                        out_dir, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
