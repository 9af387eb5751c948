// trapcool: feedback cooling of a trapped particle under continuous position
// measurement. Rates are angular frequencies in one arbitrary unit (the
// shipped configs use kHz); stationary occupancies depend only on ratios.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "trapcool/commands.hpp"
#include "trapcool/errors.hpp"

using namespace trapcool;

int main(int argc, char** argv) {
  CLI::App app{"Feedback cooling of a trapped particle: steady states, trajectories, sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  int jobs = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario file (key = value lines)");
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--jobs", jobs, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  };

  auto* steady = app.add_subcommand("steady", "bath parameters, stationary moments, optimal gain");
  auto* trajectory = app.add_subcommand("trajectory", "conditioned trajectories with feedback");
  auto* sweep = app.add_subcommand("sweep", "stationary occupancy over one parameter");
  auto* contour = app.add_subcommand("contour", "phase-space uncertainty ellipses");
  auto* validate = app.add_subcommand("validate", "cross-check theory, integrators and models");
  for (auto* sub : {steady, trajectory, sweep, contour, validate}) common(sub);

  std::string sweep_key;
  std::string sweep_values;
  sweep->add_option("--key", sweep_key, "g, eta, gamma_h, chi, phi or nu")->required();
  sweep->add_option("--values", sweep_values,
                    "a,b,c | start:stop:count | log:start:stop:count")
      ->required();
  std::string level = "fast";
  validate->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
    if (seed) cfg.seed = *seed;
    cfg.output_path = out_path;
    cfg.output_format = parse_format(format);
    const RunOptions run{jobs};

    if (*steady) return cmd_steady(cfg);
    if (*trajectory) return cmd_trajectory(cfg, run);
    if (*sweep) return cmd_sweep(cfg, sweep_key, parse_sweep_values(sweep_values), run);
    if (*contour) return cmd_contour(cfg);
    if (*validate) return cmd_validate(parse_validation_level(level), cfg, run);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_numerical() ? exit_numerical : exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_config;
}
