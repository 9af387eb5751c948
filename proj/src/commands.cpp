#include "trapcool/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <iostream>
#include <sstream>

#include <omp.h>

#include "trapcool/errors.hpp"
#include "trapcool/gaussian.hpp"

namespace trapcool {

namespace {

constexpr int kMaxRecords = 1000;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

Cell opt(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

SweepRow evaluate_row(const ScenarioConfig& base, const std::string& key, double value) {
  SweepRow row;
  row.value = value;
  try {
    ScenarioConfig c = base;
    set_config_value(c, key, format_double(value));
    c.params.validate();
    const BathParams b = bath_params(c.params);
    row.n = b.n;
    row.stable = stability(c.params);
    if (row.stable) {
      const StationaryMoments m = stationary_moments(c.params, b);
      row.zeta = m.zeta;
      row.mu_abs = std::abs(m.mu);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

void check_sweep_key(const std::string& key) {
  const auto& keys = sweepable_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    std::string list;
    for (const auto& k : keys) list += (list.empty() ? "" : ", ") + k;
    throw Error(ErrorKind::unsweepable_key, "'" + key + "' is not sweepable (use one of " + list + ")");
  }
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::config, "sweep value '" + s + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

// steady ---------------------------------------------------------------------

SteadyReport steady_report(const ScenarioConfig& cfg) {
  const SystemParams& p = cfg.params;
  SteadyReport out;
  Record& r = out.record;
  const BathParams b = bath_params(p);
  out.stable = stability(p);
  r.emplace_back("Gamma", b.gamma);
  r.emplace_back("N", b.n);
  r.emplace_back("M_re", b.m.real());
  r.emplace_back("M_im", b.m.imag());
  r.emplace_back("stable", out.stable);
  r.emplace_back("physical", b.physical());

  if (p.chi != 0.0 && p.kappa > 0.0) {
    const OptimalGain og = optimal_gain(p);
    r.emplace_back("g_opt", og.g_opt);
    r.emplace_back("n_min", og.n_min);
  }
  if (!out.stable) return out;

  const StationaryMoments m = stationary_moments(p, b);
  r.emplace_back("zeta", m.zeta);
  r.emplace_back("mu_re", m.mu.real());
  r.emplace_back("mu_im", m.mu.imag());
  bool positive = false;
  try {
    const WignerEllipse e = wigner_covariance(m);
    positive = true;
    r.emplace_back("positive", positive);
    r.emplace_back("sigma_xx", e.sigma_xx);
    r.emplace_back("sigma_pp", e.sigma_pp);
    r.emplace_back("sigma_xp", e.sigma_xp);
  } catch (const Error&) {
    r.emplace_back("positive", positive);
  }

  try {
    const FockBasisSpec spec = cfg.basis();
    const DenseOperator rho = steady_state(reduced_feedback_liouvillian(p, spec));
    const double n_num = expectation(rho, number(spec)).real();
    r.emplace_back("n_numeric", n_num);
    r.emplace_back("n_numeric_rel_dev", (n_num - b.n) / b.n);
  } catch (const Error& e) {
    r.emplace_back("n_numeric_error", std::string(e.what()));
  }
  return out;
}

int cmd_steady(const ScenarioConfig& cfg) {
  print_warnings(cfg.validate());
  const SteadyReport rep = steady_report(cfg);
  write_output(cfg.output_path, render_record(rep.record, cfg.output_format));
  if (!rep.stable) {
    std::cerr << "error: Unstable: g sin(phi) >= 0, no stationary state\n";
    return exit_numerical;
  }
  return exit_ok;
}

// trajectory -----------------------------------------------------------------

IntegratorConfig trajectory_integrator(const ScenarioConfig& cfg) {
  IntegratorConfig ic;
  ic.dt = cfg.dt;
  ic.t_final = cfg.t_final;
  ic.scheme = Scheme::kraus_euler;
  ic.seed = cfg.seed;
  ic.tail_guard = std::max(cfg.tail_tolerance, 1e-6);
  const int steps = ic.steps();
  ic.record_every = std::max(1, (steps + kMaxRecords - 1) / kMaxRecords);
  return ic;
}

Table trajectory_table(const std::vector<TrajectoryRecord>& records) {
  Table t;
  t.columns = {"traj", "time", "x_cond", "p_cond", "n_cond", "current"};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    for (std::size_t j = 0; j < r.times.size(); ++j) {
      t.rows.push_back({static_cast<long long>(i), r.times[j], r.x_cond[j], r.p_cond[j],
                        r.n_cond[j], r.current[j]});
    }
  }
  return t;
}

Table summary_table(const EnsembleSummary& s) {
  Table t;
  t.columns = {"time",   "x_mean", "x_se",         "p_mean",     "p_se",
               "n_mean", "n_se",   "current_mean", "current_se", "n_traj"};
  for (std::size_t j = 0; j < s.times.size(); ++j) {
    t.rows.push_back({s.times[j], s.x_mean[j], s.x_se[j], s.p_mean[j], s.p_se[j], s.n_mean[j],
                      s.n_se[j], s.current_mean[j], s.current_se[j],
                      static_cast<long long>(s.count)});
  }
  return t;
}

int cmd_trajectory(const ScenarioConfig& cfg, const RunOptions& run) {
  print_warnings(cfg.validate());
  const IntegratorConfig ic = trajectory_integrator(cfg);
  const bool with_feedback = cfg.params.g != 0.0;
  print_warnings(check_stochastic_step(cfg.params, ic.step_size(), with_feedback));

  EnsembleOptions eo;
  eo.n_traj = cfg.n_traj;
  eo.jobs = run.jobs;
  const auto records = run_ensemble(cfg.params, cfg.basis(), ic, with_feedback, eo);

  Table summary;
  if (records.size() >= 2) {
    summary = summary_table(ensemble_mean(records));
  } else {
    // A single trajectory: means are the record itself, no spread.
    const auto& r = records.front();
    summary.columns = {"time",   "x_mean", "x_se",         "p_mean",     "p_se",
                       "n_mean", "n_se",   "current_mean", "current_se", "n_traj"};
    for (std::size_t j = 0; j < r.times.size(); ++j) {
      summary.rows.push_back({r.times[j], r.x_cond[j], std::monostate{}, r.p_cond[j],
                              std::monostate{}, r.n_cond[j], std::monostate{}, r.current[j],
                              std::monostate{}, 1LL});
    }
  }

  if (cfg.output_path.empty()) {
    write_output("", render_table(summary, cfg.output_format));
  } else {
    write_output(cfg.output_path, render_table(trajectory_table(records), cfg.output_format));
    write_output(sibling_path(cfg.output_path, "summary"),
                 render_table(summary, cfg.output_format));
  }
  return exit_ok;
}

// sweep ----------------------------------------------------------------------

const std::vector<std::string>& sweepable_keys() {
  static const std::vector<std::string> keys = {"g", "eta", "gamma_h", "chi", "phi", "nu"};
  return keys;
}

std::vector<SweepRow> sweep_rows_serial(const ScenarioConfig& cfg, const std::string& key,
                                        const std::vector<double>& values) {
  check_sweep_key(key);
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) rows.push_back(evaluate_row(cfg, key, v));
  return rows;
}

std::vector<SweepRow> sweep_rows(const ScenarioConfig& cfg, const std::string& key,
                                 const std::vector<double>& values, const RunOptions& run) {
  check_sweep_key(key);
  const int n = static_cast<int>(values.size());
  std::vector<SweepRow> rows(values.size());
  const int threads = run.jobs > 0 ? run.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    rows[static_cast<std::size_t>(i)] = evaluate_row(cfg, key, values[static_cast<std::size_t>(i)]);
  }
  return rows;
}

std::vector<double> parse_sweep_values(const std::string& spec) {
  auto fail = [&](const std::string& why) -> std::vector<double> {
    throw Error(ErrorKind::config, "sweep values '" + spec + "': " + why);
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts = split(spec, ':');
    bool log = false;
    if (!parts.empty() && parts.front() == "log") {
      log = true;
      parts.erase(parts.begin());
    }
    if (parts.size() != 3) return fail("expected start:stop:count or log:start:stop:count");
    const double a = parse_double(parts[0]);
    const double b = parse_double(parts[1]);
    const double count_d = parse_double(parts[2]);
    if (count_d < 1.0 || count_d != std::floor(count_d) || count_d > 1e6) {
      return fail("count must be a positive integer");
    }
    const int count = static_cast<int>(count_d);
    if (log && !(a > 0.0 && b > 0.0)) return fail("log spacing needs positive bounds");
    std::vector<double> v;
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      v.push_back(log ? a * std::pow(b / a, f) : a + (b - a) * f);
    }
    return v;
  }
  std::vector<double> v;
  for (const auto& s : split(spec, ',')) v.push_back(parse_double(s));
  if (v.empty()) return fail("no values");
  return v;
}

Table sweep_table(const std::string& key, const std::vector<SweepRow>& rows) {
  Table t;
  t.columns = {key, "N", "zeta", "mu_abs", "stable", "valid", "error"};
  for (const auto& r : rows) {
    t.rows.push_back({r.value, opt(r.n), opt(r.zeta), opt(r.mu_abs), r.stable, r.error.empty(),
                      r.error});
  }
  return t;
}

int cmd_sweep(const ScenarioConfig& cfg, const std::string& key, const std::vector<double>& values,
              const RunOptions& run) {
  print_warnings(cfg.validate());
  const auto rows = sweep_rows(cfg, key, values, run);
  write_output(cfg.output_path, render_table(sweep_table(key, rows), cfg.output_format));
  return exit_ok;
}

// contour --------------------------------------------------------------------

ContourSet contour_ellipses(const SystemParams& p) {
  return {wigner_covariance(thermal_moments(p.n0)), wigner_covariance(stationary_moments(p)),
          wigner_covariance(thermal_moments(0.0))};
}

Table contour_table(const ContourSet& c, int n_points) {
  Table t;
  t.columns = {"label", "x", "p"};
  const std::pair<const char*, const WignerEllipse*> curves[] = {
      {"thermal", &c.thermal}, {"feedback", &c.feedback}, {"ground", &c.ground}};
  for (const auto& [label, e] : curves) {
    for (const auto& [x, y] : contour_polyline(*e, n_points)) {
      t.rows.push_back({std::string(label), x, y});
    }
  }
  return t;
}

int cmd_contour(const ScenarioConfig& cfg) {
  print_warnings(cfg.validate());
  write_output(cfg.output_path,
               render_table(contour_table(contour_ellipses(cfg.params)), cfg.output_format));
  return exit_ok;
}

// validate -------------------------------------------------------------------

Table validation_table(const std::vector<CheckResult>& results) {
  Table t;
  t.columns = {"id", "check", "passed", "seconds", "detail"};
  for (const auto& r : results) t.rows.push_back({r.id, r.name, r.passed, r.seconds, r.detail});
  return t;
}

int cmd_validate(ValidationLevel level, const ScenarioConfig& cfg, const RunOptions& run) {
  ValidationContext ctx;
  ctx.jobs = run.jobs;
  const auto results = run_validation(level, ctx, [](const CheckResult& r) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << " (" << r.seconds
              << " s)\n";
  });
  write_output(cfg.output_path, render_table(validation_table(results), cfg.output_format));
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  return ok ? exit_ok : exit_validation;
}

}  // namespace trapcool
