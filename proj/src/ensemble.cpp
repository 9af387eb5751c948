#include "trapcool/ensemble.hpp"

#include <cmath>
#include <exception>
#include <optional>

#include <omp.h>

#include "trapcool/errors.hpp"

namespace trapcool {

namespace {

TrajectoryOptions options_for(const EnsembleOptions& opts, int i) {
  TrajectoryOptions t;
  t.check_invariants = opts.check_invariants;
  if (opts.antithetic_pairs) {
    t.stream = opts.first_stream + static_cast<std::uint64_t>(i / 2);
    t.antithetic = (i % 2) == 1;
  } else {
    t.stream = opts.first_stream + static_cast<std::uint64_t>(i);
  }
  return t;
}

void check_count(const EnsembleOptions& opts) {
  if (opts.n_traj < 1) throw Error(ErrorKind::config, "n_traj must be >= 1");
}

Error tag(const Error& e, int i) {
  return Error(e.kind(), "trajectory " + std::to_string(i) + ": " + e.what());
}

void mean_se(const std::vector<const std::vector<double>*>& cols, std::size_t n_t,
             std::vector<double>& mean, std::vector<double>& se) {
  const double n = static_cast<double>(cols.size());
  mean.assign(n_t, 0.0);
  se.assign(n_t, 0.0);
  for (std::size_t j = 0; j < n_t; ++j) {
    double s = 0.0;
    for (const auto* c : cols) s += (*c)[j];
    const double m = s / n;
    double ss = 0.0;
    for (const auto* c : cols) ss += ((*c)[j] - m) * ((*c)[j] - m);
    mean[j] = m;
    se[j] = std::sqrt(ss / (n - 1.0) / n);
  }
}

}  // namespace

std::vector<TrajectoryRecord> run_ensemble_serial(const SystemParams& p, const FockBasisSpec& spec,
                                                  const IntegratorConfig& cfg, bool with_feedback,
                                                  const EnsembleOptions& opts) {
  check_count(opts);
  std::vector<TrajectoryRecord> out;
  out.reserve(static_cast<std::size_t>(opts.n_traj));
  for (int i = 0; i < opts.n_traj; ++i) {
    try {
      out.push_back(run_trajectory(p, spec, cfg, with_feedback, options_for(opts, i)));
    } catch (const Error& e) {
      throw tag(e, i);
    }
  }
  return out;
}

std::vector<TrajectoryRecord> run_ensemble(const SystemParams& p, const FockBasisSpec& spec,
                                           const IntegratorConfig& cfg, bool with_feedback,
                                           const EnsembleOptions& opts) {
  check_count(opts);
  const int n = opts.n_traj;
  std::vector<TrajectoryRecord> out(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  const int threads = opts.jobs > 0 ? opts.jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          run_trajectory(p, spec, cfg, with_feedback, options_for(opts, i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }

  for (int i = 0; i < n; ++i) {
    if (!errors[static_cast<std::size_t>(i)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
    } catch (const Error& e) {
      throw tag(e, i);
    }
  }
  return out;
}

EnsembleSummary ensemble_mean(const std::vector<TrajectoryRecord>& records) {
  if (records.size() < 2) throw Error(ErrorKind::grid_mismatch, "ensemble_mean needs >= 2 records");
  const auto& grid = records.front().times;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.times != grid || r.x_cond.size() != grid.size() || r.p_cond.size() != grid.size() ||
        r.n_cond.size() != grid.size() || r.current.size() != grid.size()) {
      throw Error(ErrorKind::grid_mismatch,
                  "record " + std::to_string(i) + " does not share the time grid of record 0");
    }
  }

  EnsembleSummary s;
  s.times = grid;
  s.count = static_cast<int>(records.size());
  std::vector<const std::vector<double>*> x, p, n, c;
  for (const auto& r : records) {
    x.push_back(&r.x_cond);
    p.push_back(&r.p_cond);
    n.push_back(&r.n_cond);
    c.push_back(&r.current);
  }
  mean_se(x, grid.size(), s.x_mean, s.x_se);
  mean_se(p, grid.size(), s.p_mean, s.p_se);
  mean_se(n, grid.size(), s.n_mean, s.n_se);
  mean_se(c, grid.size(), s.current_mean, s.current_se);

  const int d = records.front().final_state.dim();
  bool same_dim = d > 0;
  for (const auto& r : records) same_dim = same_dim && r.final_state.dim() == d;
  if (same_dim) {
    CMatrix acc = CMatrix::Zero(d, d);
    for (const auto& r : records) acc += r.final_state.matrix();
    s.mean_final_state = DenseOperator(acc / static_cast<double>(records.size()));
  }
  return s;
}

}  // namespace trapcool
