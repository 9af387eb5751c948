#pragma once

// Trajectory ensembles: independent runs over consecutive noise streams and
// their pointwise average.

#include <vector>

#include "trapcool/sme.hpp"

namespace trapcool {

struct EnsembleSummary {
  std::vector<double> times;
  std::vector<double> x_mean, x_se;
  std::vector<double> p_mean, p_se;
  std::vector<double> n_mean, n_se;
  std::vector<double> current_mean, current_se;
  DenseOperator mean_final_state;
  int count = 0;
};

struct EnsembleOptions {
  int n_traj = 200;
  std::uint64_t first_stream = 0;
  bool antithetic_pairs = false;  // odd streams mirror the noise of the preceding even one
  bool check_invariants = false;
  int jobs = 0;                   // 0: OpenMP default
};

/// Reference implementation, one trajectory after another.
std::vector<TrajectoryRecord> run_ensemble_serial(const SystemParams& p, const FockBasisSpec& spec,
                                                  const IntegratorConfig& cfg, bool with_feedback,
                                                  const EnsembleOptions& opts);

/// Same result as run_ensemble_serial, trajectories distributed over threads.
/// If any trajectory fails, the error of the lowest failing index is rethrown
/// with that index in the message.
std::vector<TrajectoryRecord> run_ensemble(const SystemParams& p, const FockBasisSpec& spec,
                                           const IntegratorConfig& cfg, bool with_feedback,
                                           const EnsembleOptions& opts);

/// Pointwise means and standard errors. Needs at least two records on one
/// time grid (throws grid_mismatch otherwise).
EnsembleSummary ensemble_mean(const std::vector<TrajectoryRecord>& records);

}  // namespace trapcool
