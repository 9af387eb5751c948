#include "trapcool/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "trapcool/ensemble.hpp"
#include "trapcool/errors.hpp"
#include "trapcool/sme.hpp"

namespace trapcool {

namespace {

constexpr double kPi = std::numbers::pi;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double x, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

CheckResult make(std::string id, std::string name) {
  CheckResult r;
  r.id = std::move(id);
  r.name = std::move(name);
  return r;
}

double mean_of(const DenseOperator& rho, const DenseOperator& op) {
  return expectation(rho, op).real();
}

// Points on the documented property grid (φ = −π/2 throughout, κ = 1).
std::vector<SystemParams> property_grid() {
  std::vector<SystemParams> out;
  for (double chi_over_kappa : {0.01, 0.05, 0.1, 0.2}) {
    for (double heat_ratio : {0.0, 0.1, 1.0, 10.0}) {
      for (double eta : {0.1, 0.5, 0.9, 1.0}) {
        for (double gain_ratio : {0.1, 0.5, 1.0, 2.0, 10.0}) {
          for (double nu_ratio : {10.0, 100.0, 1e3, 1e4}) {
            SystemParams p;
            p.kappa = 1.0;
            p.chi = chi_over_kappa;
            p.gamma_h = heat_ratio * p.chi * p.chi / (4.0 * p.kappa);
            p.eta = eta;
            p.phi = -kPi / 2.0;
            p.g = gain_ratio * optimal_gain(p).g_opt;
            p.nu = nu_ratio * p.g;
            out.push_back(p);
          }
        }
      }
    }
  }
  return out;
}

// Parameters of the adiabatic-elimination checks: κ = 1, ν and γ_h scaled with
// the measurement rate so that only χ/κ changes between the two solves.
SystemParams adiabatic_params(double chi_over_kappa) {
  SystemParams p;
  p.kappa = 1.0;
  p.chi = chi_over_kappa;
  const double k = p.measurement_rate();
  p.nu = 4.0 * k;
  p.gamma_h = 0.05 * k;
  p.eta = 0.9;
  p.phi = -kPi / 2.0;
  p.g = optimal_gain(p).g_opt;
  p.n0 = 0.0;
  return p;
}

Superoperator full_generator(const SystemParams& p, MeterCase which, const FockBasisSpec& vib) {
  if (which == MeterCase::resonant) return resonant_full_liouvillian(p, vib);
  return offresonant_full_liouvillian(p, vib, FockBasisSpec{3, 1e-8});
}

}  // namespace

ValidationLevel parse_validation_level(const std::string& s) {
  if (s == "fast") return ValidationLevel::fast;
  if (s == "full") return ValidationLevel::full;
  throw Error(ErrorKind::config, "validation level must be fast or full, got '" + s + "'");
}

void InvariantLog::add_state(const DenseOperator& rho, double trace_error) {
  ++states;
  max_trace_error = std::max(max_trace_error, trace_error);
  max_hermiticity_error =
      std::max(max_hermiticity_error, (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff());
  min_eigenvalue = std::min(min_eigenvalue, trapcool::min_eigenvalue(rho));
}

bool InvariantLog::ok() const {
  return states > 0 && max_trace_error <= 1e-7 && max_hermiticity_error <= 1e-10 &&
         min_eigenvalue >= -1e-6 && min_uncertainty_product >= 1.0 / 16.0 - 1e-6;
}

SystemParams rescaled_params() {
  SystemParams p = SystemParams::fig1();
  p.nu = 50.0 * p.g;
  p.n0 = 1.0;
  return p;
}

CheckResult check_fig1(ValidationContext& ctx) {
  CheckResult r = make("1", "contours for the default parameters");
  const Timer timer;
  const SystemParams p = SystemParams::fig1();
  const BathParams b = ctx.hooks.bath(p);
  const WignerEllipse fb = wigner_covariance(stationary_moments(p, b));
  const WignerEllipse thermal = wigner_covariance(thermal_moments(p.n0));
  const WignerEllipse ground = wigner_covariance(thermal_moments(0.0));

  auto radii = [](const WignerEllipse& e) {
    double lo = 1e300, hi = 0.0;
    for (const auto& [x, y] : contour_polyline(e, 256)) {
      const double rad = std::hypot(x, y);
      lo = std::min(lo, rad);
      hi = std::max(hi, rad);
    }
    return std::pair{lo, hi};
  };
  const auto [fb_lo, fb_hi] = radii(fb);
  const auto [th_lo, th_hi] = radii(thermal);
  const auto [gr_lo, gr_hi] = radii(ground);
  const double ground_r = 0.5 * (gr_lo + gr_hi);
  r.seconds = timer.seconds();

  const bool n_ok = std::abs(b.n - 0.0538) <= 1e-4;
  const bool fb_ok = fb_lo >= ground_r - 1e-12 && fb_hi <= 1.06 * ground_r;
  const bool th_ok = std::abs(th_lo - 2.291) <= 1e-3 && std::abs(th_hi - 2.291) <= 1e-3;
  const bool gr_ok = std::abs(gr_lo - 0.5) <= 1e-12 && std::abs(gr_hi - 0.5) <= 1e-12;
  r.passed = n_ok && fb_ok && th_ok && gr_ok && r.seconds < 1.0;
  r.detail = "N=" + num(b.n) + " feedback radii [" + num(fb_lo) + ", " + num(fb_hi) +
             "] (+" + num(100.0 * (fb_hi / ground_r - 1.0), 3) + "% over ground), thermal radius " +
             num(th_hi) + ", ground radius " + num(ground_r);
  return r;
}

CheckResult check_formula_vs_integrator(ValidationContext& ctx) {
  CheckResult r = make("2", "stationary moments: closed form vs Lindblad integration");
  const Timer timer;
  const SystemParams p = rescaled_params();
  const FockBasisSpec spec{30, 1e-8};
  const Superoperator l = reduced_feedback_liouvillian(p, spec);
  const StationaryMoments m = stationary_moments(p, ctx.hooks.bath(p));

  IntegratorConfig cfg;
  cfg.dt = 0.0025;
  cfg.t_final = 60.0;
  cfg.renormalize = false;
  cfg.record_every = 1;
  const DenseOperator rho = integrate_lindblad(
      l, thermal_state(spec, p.n0), cfg, [&](double, const DenseOperator& s) {
        ctx.invariants.add_state(s, std::abs(s.trace().real() - 1.0));
      });
  ctx.invariants.sources.push_back("Lindblad integration (2)");

  const DenseOperator a = annihilation(spec);
  const double n = mean_of(rho, number(spec));
  const cplx a2 = expectation(rho, a * a);
  const double rel = std::abs(n - m.zeta) / m.zeta;
  const double mu_err = std::abs(a2 - m.mu);
  r.seconds = timer.seconds();
  r.passed = rel <= 0.01 && mu_err <= 1e-3 && r.seconds < 30.0;
  r.detail = "<a+a>=" + num(n) + " zeta=" + num(m.zeta) + " (rel " + num(rel, 3) +
             "), |<a^2>-mu|=" + num(mu_err, 3) + ", nu/g=50, n_trunc=30, t=60";
  return r;
}

CheckResult check_unraveling(ValidationContext& ctx, int n_traj) {
  CheckResult r = make("3", "feedback trajectory ensemble vs Lindblad integration");
  const Timer timer;
  const SystemParams p = rescaled_params();
  const FockBasisSpec spec{26, 1e-8};

  IntegratorConfig cfg;
  cfg.dt = 0.0025;
  cfg.t_final = 10.0;
  cfg.scheme = Scheme::kraus_euler;
  cfg.seed = 20240601;
  cfg.record_every = 200;
  EnsembleOptions eo;
  eo.n_traj = n_traj;
  eo.check_invariants = true;
  eo.jobs = ctx.jobs;
  const auto records = run_ensemble(p, spec, cfg, true, eo);
  const EnsembleSummary s = ensemble_mean(records);

  for (const auto& rec : records) {
    const auto& d = rec.diagnostics;
    auto& log = ctx.invariants;
    log.states += static_cast<long long>(cfg.steps());
    log.max_trace_error = std::max(log.max_trace_error, d.max_trace_error);
    log.max_hermiticity_error = std::max(log.max_hermiticity_error, d.max_hermiticity_error);
    log.min_eigenvalue = std::min(log.min_eigenvalue, d.min_eigenvalue);
    log.min_uncertainty_product = std::min(log.min_uncertainty_product, d.min_uncertainty_product);
  }
  ctx.invariants.sources.push_back("trajectory ensemble (3)");

  IntegratorConfig lc;
  lc.dt = cfg.dt;
  lc.t_final = cfg.t_final;
  lc.record_every = cfg.record_every;
  std::vector<double> lindblad_n;
  const DenseOperator num_op = number(spec);
  integrate_lindblad(reduced_feedback_liouvillian(p, spec), thermal_state(spec, p.n0), lc,
                     [&](double, const DenseOperator& rho) { lindblad_n.push_back(mean_of(rho, num_op)); });

  double max_z = 0.0;
  double se_lo = 1e300, se_hi = 0.0;
  int outside = 0;
  const std::size_t n_points = s.times.size();
  for (std::size_t j = 1; j < n_points; ++j) {
    const double se = s.n_se[j];
    const double z = std::abs(s.n_mean[j] - lindblad_n[j]) / se;
    max_z = std::max(max_z, z);
    se_lo = std::min(se_lo, se);
    se_hi = std::max(se_hi, se);
    if (!(z <= 3.0)) ++outside;
  }
  r.seconds = timer.seconds();
  r.passed = n_points == 21 && outside == 0 && r.seconds < 600.0;
  r.detail = std::to_string(n_traj) + " trajectories, " + std::to_string(n_points - 1) +
             " checkpoints, max |z|=" + num(max_z, 3) + ", SE in [" + num(se_lo, 3) + ", " +
             num(se_hi, 3) + "], final mean " + num(s.n_mean.back()) + " vs " +
             num(lindblad_n.back());
  return r;
}

CheckResult check_adiabatic(ValidationContext& ctx, MeterCase which) {
  const bool res = which == MeterCase::resonant;
  CheckResult r = make(res ? "4a" : "4b",
                       std::string("adiabatic elimination, ") + (res ? "resonant two-level meter"
                                                                     : "off-resonant field mode"));
  const Timer timer;
  const FockBasisSpec vib{25, 1e-8};
  const int meter_dim = res ? 2 : 4;

  auto solve = [&](double ratio, double* residual) {
    const SystemParams p = adiabatic_params(ratio);
    const DenseOperator d = steady_state(full_generator(p, which, vib));
    ctx.invariants.add_state(d, std::abs(d.trace().real() - 1.0));
    *residual = adiabatic_expansion_residual(d, p, which, meter_dim);
    return partial_trace_meter(d, vib.dim(), meter_dim);
  };

  double res_1 = 0.0, res_2 = 0.0;
  const DenseOperator rho_full = solve(0.05, &res_1);
  solve(0.025, &res_2);
  ctx.invariants.sources.push_back(std::string("full steady states (") + r.id + ")");

  const SystemParams p = adiabatic_params(0.05);
  const DenseOperator rho_red = steady_state(reduced_feedback_liouvillian(p, vib));
  const DenseOperator x = quadrature(vib, Quadrature::position);
  const DenseOperator n = number(vib);
  const double n_full = mean_of(rho_full, n), n_red = mean_of(rho_red, n);
  const double x2_full = mean_of(rho_full, x * x), x2_red = mean_of(rho_red, x * x);
  const double x_diff = std::abs(mean_of(rho_full, x) - mean_of(rho_red, x));
  const double n_rel = std::abs(n_full - n_red) / n_red;
  const double x2_rel = std::abs(x2_full - x2_red) / x2_red;
  const double ratio = res_1 / res_2;

  r.seconds = timer.seconds();
  r.passed = n_rel <= 0.05 && x2_rel <= 0.05 && x_diff <= 0.05 * std::sqrt(x2_red) &&
             ratio >= 3.0 && r.seconds < 120.0;
  r.detail = "<a+a> full " + num(n_full) + " vs reduced " + num(n_red) + " (rel " + num(n_rel, 3) +
             "), <X^2> rel " + num(x2_rel, 3) + ", |d<X>|=" + num(x_diff, 3) +
             ", residual " + num(res_1, 3) + " -> " + num(res_2, 3) + " (ratio " +
             num(ratio, 3) + ")";
  return r;
}

CheckResult check_optimal_gain(ValidationContext& ctx) {
  CheckResult r = make("5", "optimal gain: closed form vs scan of N(g)");
  const Timer timer;
  auto scan = [&](SystemParams p, double g_ref) {
    const int points = 40001;
    double best_g = 0.0, best_n = 1e300;
    for (int i = 0; i < points; ++i) {
      p.g = g_ref * std::pow(10.0, -2.0 + 4.0 * i / (points - 1));
      const double n = ctx.hooks.bath(p).n;
      if (n < best_n) {
        best_n = n;
        best_g = p.g;
      }
    }
    return std::pair{best_g, best_n};
  };

  const SystemParams p = SystemParams::fig1();
  const OptimalGain og = optimal_gain(p);
  const auto [g_scan, n_scan] = scan(p, og.g_opt);
  const bool closed_ok = std::abs(og.g_opt - 0.398) <= 5e-4 && std::abs(og.n_min - 0.0528) <= 5e-5;
  const bool scan_ok = std::abs(g_scan / og.g_opt - 1.0) <= 1e-3 &&
                       std::abs(n_scan / og.n_min - 1.0) <= 1e-3;

  SystemParams ideal = p;
  ideal.eta = 1.0;
  ideal.gamma_h = 0.0;
  const OptimalGain og_ideal = optimal_gain(ideal);
  const auto [g_ideal, n_ideal] = scan(ideal, og_ideal.g_opt);
  ideal.g = og_ideal.g_opt;
  const double n_at_opt = ctx.hooks.bath(ideal).n;
  const bool ideal_ok = og_ideal.n_min == 0.0 && std::abs(n_at_opt) <= 1e-12 && n_ideal >= -1e-12 &&
                        n_ideal <= 1e-12;

  r.seconds = timer.seconds();
  r.passed = closed_ok && scan_ok && ideal_ok;
  r.detail = "g_opt=" + num(og.g_opt) + " (scan " + num(g_scan) + "), n_min=" + num(og.n_min) +
             " (scan " + num(n_scan) + "); eta=1, gamma_h=0: n_min=" + num(og_ideal.n_min) +
             ", N(g_opt)=" + num(n_at_opt, 3) + ", scan min " + num(n_ideal, 3) + " at g=" +
             num(g_ideal);
  return r;
}

CheckResult check_bath_physicality(ValidationContext& ctx) {
  CheckResult r = make("6a", "|M|^2 <= N(N+1) and N >= n_min on the parameter grid");
  const Timer timer;
  int bad = 0, total = 0;
  double worst = -1e300;
  for (const SystemParams& p : property_grid()) {
    const BathParams b = ctx.hooks.bath(p);
    const double n_min = optimal_gain(p).n_min;
    worst = std::max(worst, std::norm(b.m) - b.n * (b.n + 1.0));
    if (!b.physical(1e-12) || b.n < n_min - 1e-12) ++bad;
    ++total;
  }
  r.seconds = timer.seconds();
  r.passed = bad == 0;
  r.detail = std::to_string(total) + " points, " + std::to_string(bad) +
             " violations, max |M|^2-N(N+1)=" + num(worst, 3);
  return r;
}

CheckResult check_stability_equivalence(ValidationContext& ctx) {
  (void)ctx;
  CheckResult r = make("6b", "g sin(phi) < 0 <=> stable generator");
  const Timer timer;
  const FockBasisSpec drift_spec{8, 1e-8};
  const FockBasisSpec eig_spec{6, 1e-8};
  int total = 0, mismatched = 0, spectrum_bad = 0;
  double max_re = -1e300;
  for (double phi : {-3.0 * kPi / 4.0, -kPi / 2.0, -kPi / 4.0, -0.1, 0.1, kPi / 4.0, kPi / 2.0,
                     3.0 * kPi / 4.0}) {
    for (double g : {-0.4, -0.1, 0.1, 0.4}) {
      SystemParams p = rescaled_params();
      p.phi = phi;
      p.g = g;
      const bool formula = stability(p);
      const bool drift = drift_growth_rate(reduced_feedback_liouvillian(p, drift_spec)) < -1e-10;
      if (formula != drift) ++mismatched;
      if (formula) {
        const Eigen::MatrixXcd l(reduced_feedback_liouvillian(p, eig_spec).matrix());
        const double re = l.eigenvalues().real().maxCoeff();
        max_re = std::max(max_re, re);
        if (re > 1e-10) ++spectrum_bad;
      }
      ++total;
    }
  }
  r.seconds = timer.seconds();
  r.passed = mismatched == 0 && spectrum_bad == 0;
  r.detail = std::to_string(total) + " (g, phi) pairs, " + std::to_string(mismatched) +
             " disagreements between g sin(phi) < 0 and first-moment decay; max Re(eig L) on "
             "stable points " + num(max_re, 3);
  return r;
}

CheckResult check_quantum_limit(ValidationContext& ctx) {
  CheckResult r = make("6c", "stationary Wigner variance >= 1/4");
  const Timer timer;
  int bad = 0, total = 0;
  double lowest = 1e300;
  SystemParams worst;
  BathParams worst_bath;
  for (const SystemParams& p : property_grid()) {
    const BathParams b = ctx.hooks.bath(p);
    const WignerEllipse e = wigner_covariance(stationary_moments(p, b));
    if (e.min_variance() < lowest) {
      lowest = e.min_variance();
      worst = p;
      worst_bath = b;
    }
    if (e.min_variance() < 0.25 - 1e-9) ++bad;
    ++total;
  }
  r.seconds = timer.seconds();
  r.passed = bad == 0;
  r.detail = std::to_string(total) + " points, " + std::to_string(bad) +
             " below 1/4; smallest eigenvalue " + num(lowest, 9) + " at eta=" + num(worst.eta) +
             " gamma_h=" + num(worst.gamma_h) + " g/g_opt=" +
             num(worst.g / optimal_gain(worst).g_opt) + " nu/g=" + num(worst.nu / worst.g) +
             " (N=" + num(worst_bath.n, 3) + ")";
  return r;
}

CheckResult check_integrator_invariants(ValidationContext& ctx) {
  CheckResult r = make("6d", "trace, Hermiticity and positivity on every integrator step");
  const InvariantLog& log = ctx.invariants;
  r.passed = log.ok();
  std::string sources;
  for (const auto& s : log.sources) sources += (sources.empty() ? "" : ", ") + s;
  r.detail = std::to_string(log.states) + " states [" + sources + "]: max|Tr-1|=" +
             num(log.max_trace_error, 3) + " max|rho-rho+|=" + num(log.max_hermiticity_error, 3) +
             " min eig=" + num(log.min_eigenvalue, 3);
  if (log.min_uncertainty_product < 1.0) {
    r.detail += " min Var(X)Var(P)=" + num(log.min_uncertainty_product, 6);
  }
  return r;
}

std::vector<CheckResult> run_validation(ValidationLevel level, ValidationContext& ctx,
                                        const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> results;
  auto run = [&](const std::string& id, const std::string& name, const auto& fn) {
    const Timer timer;
    CheckResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = make(id, name);
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
      r.seconds = timer.seconds();
    }
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };

  run("1", "default-parameter contours", [&] { return check_fig1(ctx); });
  run("2", "formula vs integrator", [&] { return check_formula_vs_integrator(ctx); });
  if (level == ValidationLevel::full) {
    run("3", "trajectory ensemble", [&] { return check_unraveling(ctx); });
    run("4a", "adiabatic elimination (resonant)",
        [&] { return check_adiabatic(ctx, MeterCase::resonant); });
    run("4b", "adiabatic elimination (off-resonant)",
        [&] { return check_adiabatic(ctx, MeterCase::offresonant); });
  }
  run("5", "optimal gain", [&] { return check_optimal_gain(ctx); });
  run("6a", "bath physicality", [&] { return check_bath_physicality(ctx); });
  run("6b", "stability", [&] { return check_stability_equivalence(ctx); });
  run("6c", "quantum limit", [&] { return check_quantum_limit(ctx); });
  run("6d", "integrator invariants", [&] { return check_integrator_invariants(ctx); });
  return results;
}

}  // namespace trapcool
