#pragma once

// Subcommands of the trapcool tool. The builders return data; the cmd_*
// functions render it, write it to cfg.output_path (stdout when empty) and
// return the process exit code.

#include <optional>
#include <string>
#include <vector>

#include "trapcool/config.hpp"
#include "trapcool/ensemble.hpp"
#include "trapcool/output.hpp"
#include "trapcool/validation.hpp"

namespace trapcool {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2, exit_validation = 3 };

struct RunOptions {
  int jobs = 0;  // 0: OpenMP default
};

// steady ---------------------------------------------------------------------

struct SteadyReport {
  Record record;
  bool stable = false;
};

/// Bath parameters, flags, optimum and (for stable parameters) the analytic
/// moments and the numerically solved stationary occupancy.
SteadyReport steady_report(const ScenarioConfig& cfg);
int cmd_steady(const ScenarioConfig& cfg);

// trajectory -----------------------------------------------------------------

/// Step settings used by the trajectory command: at most ~1000 records.
IntegratorConfig trajectory_integrator(const ScenarioConfig& cfg);

Table trajectory_table(const std::vector<TrajectoryRecord>& records);
Table summary_table(const EnsembleSummary& s);

/// Writes all trajectories to cfg.output_path and the ensemble summary next to
/// it (`name.summary.ext`); with no path only the summary goes to stdout.
int cmd_trajectory(const ScenarioConfig& cfg, const RunOptions& run = {});

// sweep ----------------------------------------------------------------------

struct SweepRow {
  double value = 0.0;
  std::optional<double> n;
  std::optional<double> zeta;
  std::optional<double> mu_abs;
  bool stable = false;
  std::string error;  // set when the row could not be evaluated
};

const std::vector<std::string>& sweepable_keys();

/// Throws unsweepable_key for keys outside sweepable_keys().
std::vector<SweepRow> sweep_rows_serial(const ScenarioConfig& cfg, const std::string& key,
                                        const std::vector<double>& values);
std::vector<SweepRow> sweep_rows(const ScenarioConfig& cfg, const std::string& key,
                                 const std::vector<double>& values, const RunOptions& run = {});

/// "a,b,c" or "start:stop:count" (linear), "log:start:stop:count" (geometric).
std::vector<double> parse_sweep_values(const std::string& spec);

Table sweep_table(const std::string& key, const std::vector<SweepRow>& rows);
int cmd_sweep(const ScenarioConfig& cfg, const std::string& key, const std::vector<double>& values,
              const RunOptions& run = {});

// contour --------------------------------------------------------------------

inline constexpr int kContourPoints = 256;

struct ContourSet {
  WignerEllipse thermal;
  WignerEllipse feedback;
  WignerEllipse ground;
};

ContourSet contour_ellipses(const SystemParams& p);
Table contour_table(const ContourSet& c, int n_points = kContourPoints);
int cmd_contour(const ScenarioConfig& cfg);

// validate -------------------------------------------------------------------

Table validation_table(const std::vector<CheckResult>& results);
int cmd_validate(ValidationLevel level, const ScenarioConfig& cfg, const RunOptions& run = {});

}  // namespace trapcool
