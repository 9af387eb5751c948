#include "trapcool/sme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "trapcool/errors.hpp"

namespace trapcool {

namespace {

constexpr cplx kI{0.0, 1.0};

// dt·‖L‖₁ bounds: RK4 is stable on the left half-disk of radius 2.5; Heun is
// weakly unstable on the imaginary axis (growth ~ (dt‖L‖)⁴/8 per step).
constexpr double kRk4Bound = 2.5;
constexpr double kHeunBound = 0.1;

void symmetrize(Eigen::VectorXcd& v, int d) {
  Eigen::Map<CMatrix> m(v.data(), d, d);
  const CMatrix h = 0.5 * (m + m.adjoint());
  m = h;
}

cplx trace_of(const Eigen::VectorXcd& v, int d) {
  cplx t = 0.0;
  for (int i = 0; i < d; ++i) t += v(i * (d + 1));
  return t;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::euler_maruyama: return "euler_maruyama";
    case Scheme::kraus_euler: return "kraus_euler";
    case Scheme::heun_deterministic: return "heun_deterministic";
    case Scheme::rk4_deterministic: return "rk4_deterministic";
  }
  return "unknown";
}

int IntegratorConfig::steps() const {
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw Error(ErrorKind::config, "dt must be > 0 and t_final >= 0");
  return static_cast<int>(std::ceil(t_final / dt - 1e-9));
}

double IntegratorConfig::step_size() const {
  const int n = steps();
  return n == 0 ? dt : t_final / n;
}

// ---------------------------------------------------------------------------

DenseOperator integrate_lindblad(const Superoperator& l, const DenseOperator& rho0,
                                 const IntegratorConfig& cfg, const StateObserver& observer) {
  if (rho0.dim() != l.dim()) throw Error(ErrorKind::dimension_mismatch, "integrate_lindblad: state dim");
  if (cfg.record_every < 1) throw Error(ErrorKind::config, "record_every must be >= 1");
  const bool rk4 = cfg.scheme != Scheme::heun_deterministic;
  if (cfg.scheme == Scheme::euler_maruyama || cfg.scheme == Scheme::kraus_euler) {
    throw Error(ErrorKind::config, "integrate_lindblad needs a deterministic scheme");
  }
  const int n_steps = cfg.steps();
  const double h = cfg.step_size();
  const double bound = rk4 ? kRk4Bound : kHeunBound;
  if (h * l.norm1() > bound) {
    throw Error(ErrorKind::step_too_large, "dt*|L|_1 = " + fmt(h * l.norm1()) +
                                               " exceeds the " + to_string(cfg.scheme) +
                                               " bound " + fmt(bound));
  }

  const int d = l.dim();
  const SparseCMatrix& m = l.matrix();
  Eigen::VectorXcd v = vectorize(rho0);
  Eigen::VectorXcd k1, k2, k3, k4;

  auto check_tail = [&](double t) {
    const DenseOperator rho = unvectorize(v, d);
    const double tail = top_population(rho, l.layout().vib_dim, l.layout().meter_dim);
    if (tail > cfg.tail_guard) {
      throw Error(ErrorKind::tail_too_heavy, "top-level population " + fmt(tail) + " at t=" +
                                                 fmt(t) + " exceeds tail_guard " +
                                                 fmt(cfg.tail_guard));
    }
    return rho;
  };

  if (observer) observer(0.0, check_tail(0.0));
  for (int step = 1; step <= n_steps; ++step) {
    if (rk4) {
      k1 = m * v;
      k2 = m * (v + 0.5 * h * k1);
      k3 = m * (v + 0.5 * h * k2);
      k4 = m * (v + h * k3);
      v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      k1 = m * v;
      k2 = m * (v + h * k1);
      v += 0.5 * h * (k1 + k2);
    }
    symmetrize(v, d);
    if (cfg.renormalize) v /= trace_of(v, d).real();

    if (step % cfg.record_every == 0 || step == n_steps) {
      const double t = step * h;
      const DenseOperator rho = check_tail(t);
      if (observer) observer(t, rho);
    }
  }
  return unvectorize(v, d);
}

DenseOperator steady_state(const Superoperator& l, const SteadyStateOptions& opts) {
  const SpaceLayout& layout = l.layout();
  if (layout.meter_dim == 1 && layout.vib_dim >= 4) {
    const double growth = drift_growth_rate(l);
    if (growth > 1e-10) {
      throw Error(ErrorKind::unstable,
                  "first-moment drift grows at rate " + fmt(growth) + "; no stationary state");
    }
  }

  const int d = l.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  // Replace the (0,0) population equation, which is linearly dependent on the
  // other diagonal equations, by the trace condition.
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(l.matrix().nonZeros() + d));
  for (int k = 0; k < l.matrix().outerSize(); ++k) {
    for (SparseCMatrix::InnerIterator it(l.matrix(), k); it; ++it) {
      if (it.row() != 0) trip.emplace_back(static_cast<int>(it.row()), k, it.value());
    }
  }
  for (int i = 0; i < d; ++i) trip.emplace_back(0, i * (d + 1), cplx(1.0));
  SparseCMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();

  Eigen::SparseLU<SparseCMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorKind::not_unique, "generator kernel is degenerate (singular factorization)");
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(0) = 1.0;
  Eigen::VectorXcd x = lu.solve(rhs);

  // Conditioning probe: ‖A‖₁‖A⁻¹b‖/‖b‖ for a fixed pseudo-random b.
  Eigen::VectorXcd probe(n);
  const NoiseStream noise(0x5eed, 0);
  for (Eigen::Index i = 0; i < n; ++i) probe(i) = cplx(noise.normal(2 * i), noise.normal(2 * i + 1));
  const Eigen::VectorXcd y = lu.solve(probe);
  double a_norm = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    double col = 0.0;
    for (SparseCMatrix::InnerIterator it(a, k); it; ++it) col += std::abs(it.value());
    a_norm = std::max(a_norm, col);
  }
  const double cond = a_norm * y.norm() / probe.norm();
  if (!x.allFinite() || !(cond < opts.condition_limit)) {
    throw Error(ErrorKind::not_unique,
                "generator kernel is degenerate (condition estimate " + fmt(cond) + ")");
  }

  symmetrize(x, d);
  x /= trace_of(x, d).real();
  DenseOperator rho = unvectorize(x, d);
  const double tail = top_population(rho, layout.vib_dim, layout.meter_dim);
  if (tail > opts.tail_tolerance) {
    throw Error(ErrorKind::tail_too_heavy, "stationary state has top-level population " + fmt(tail));
  }
  return rho;
}

double generator_residual(const Superoperator& l, const DenseOperator& rho) {
  return (l.matrix() * vectorize(rho)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

HomodyneFilter::HomodyneFilter(const SystemParams& p, const FockBasisSpec& spec, double dt,
                               Scheme scheme)
    : p_(p), spec_(spec), dt_(dt), scheme_(scheme), k_(p.measurement_rate()) {
  if (scheme != Scheme::euler_maruyama && scheme != Scheme::kraus_euler) {
    throw Error(ErrorKind::config, "homodyne filter needs a stochastic scheme");
  }
  if (!(dt > 0.0)) throw Error(ErrorKind::config, "dt must be > 0");
  const int d = spec.dim();
  x_ = quadrature(spec, Quadrature::position).matrix();
  a_ = annihilation(spec).matrix();
  ad_ = a_.adjoint();
  drift_ = -0.5 * (k_ * x_ * x_ + p.gamma_h * (ad_ * a_ + a_ * ad_));
  rotation_.resize(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) rotation_(m, n) = std::exp(-kI * (p.nu * (m - n) * dt));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(quadrature(spec, Quadrature::momentum).matrix());
  p_vecs_ = es.eigenvectors();
  p_vals_ = es.eigenvalues();
}

void HomodyneFilter::rotate(CMatrix& rho) const { rho = rho.cwiseProduct(rotation_); }

double HomodyneFilter::measure(CMatrix& rho, double dw, double* trace_before_norm) const {
  rotate(rho);
  const double x_mean = (rho.array() * x_.transpose().array()).sum().real();
  const double sin_phi = std::sin(p_.phi);
  const double sqrt_eta_k = std::sqrt(p_.eta * k_);
  const double h = dt_;

  if (scheme_ == Scheme::euler_maruyama) {
    const CMatrix x_rho = x_ * rho;
    const CMatrix rho_x = rho * x_;
    CMatrix drho = h * (drift_ * rho + rho * drift_.adjoint() + k_ * x_rho * x_ +
                        p_.gamma_h * (a_ * rho * ad_ + ad_ * rho * a_));
    drho += (sqrt_eta_k * dw) * (kI * std::exp(kI * p_.phi) * rho_x -
                                 kI * std::exp(-kI * p_.phi) * x_rho + 2.0 * sin_phi * x_mean * rho);
    rho += drho;
  } else {
    // Record increment for c = −i e^{−iφ} √k X: dy = √η⟨c + c†⟩dt + dW.
    const double dy = -2.0 * sqrt_eta_k * sin_phi * x_mean * h + dw;
    const cplx c_coeff = -kI * std::exp(-kI * p_.phi) * std::sqrt(k_);
    CMatrix kraus = h * drift_ + (std::sqrt(p_.eta) * c_coeff * dy) * x_;
    kraus.diagonal().array() += 1.0;
    const CMatrix next = kraus * rho * kraus.adjoint() +
                         h * ((1.0 - p_.eta) * k_ * x_ * rho * x_ +
                              p_.gamma_h * (a_ * rho * ad_ + ad_ * rho * a_));
    rho = next;
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (trace_before_norm) *trace_before_norm = tr;
  rho /= tr;
  return 2.0 * p_.eta * k_ * sin_phi * x_mean * h - sqrt_eta_k * dw;
}

void HomodyneFilter::feedback(CMatrix& rho, double d_current) const {
  if (p_.g == 0.0 || d_current == 0.0) return;
  if (!(k_ > 0.0)) throw Error(ErrorKind::config, "feedback requires chi > 0");
  const double s = -d_current / (p_.eta * k_);
  const Eigen::VectorXcd phases = (kI * (p_.g * s) * p_vals_.cast<cplx>()).array().exp();
  const CMatrix u = p_vecs_ * phases.asDiagonal() * p_vecs_.adjoint();
  rho = u * rho * u.adjoint();
}

HomodyneStep homodyne_step(const DenseOperator& rho_c, double dw, const SystemParams& p,
                           const FockBasisSpec& spec, double dt, Scheme scheme) {
  if (rho_c.dim() != spec.dim()) throw Error(ErrorKind::dimension_mismatch, "homodyne_step");
  const HomodyneFilter filter(p, spec, dt, scheme);
  CMatrix rho = rho_c.matrix();
  const double di = filter.measure(rho, dw);
  const double tail = top_population(DenseOperator(rho), spec.dim());
  if (tail > spec.tail_tolerance) {
    throw Error(ErrorKind::tail_too_heavy, "top-level population " + fmt(tail));
  }
  return {DenseOperator(std::move(rho)), di};
}

DenseOperator feedback_step(const DenseOperator& rho_c, double d_current, const SystemParams& p,
                            const FockBasisSpec& spec) {
  if (rho_c.dim() != spec.dim()) throw Error(ErrorKind::dimension_mismatch, "feedback_step");
  const HomodyneFilter filter(p, spec, 1.0);
  CMatrix rho = rho_c.matrix();
  filter.feedback(rho, d_current);
  return DenseOperator(std::move(rho));
}

std::vector<std::string> check_stochastic_step(const SystemParams& p, double dt,
                                               bool with_feedback) {
  double fastest = std::max(p.nu, p.kappa);
  if (with_feedback) fastest = std::max(fastest, std::abs(p.g * std::sin(p.phi)));
  const double ratio = dt * fastest;
  if (ratio > 0.1) {
    throw Error(ErrorKind::step_too_large,
                "dt*max(nu, kappa, Gamma) = " + fmt(ratio) + " exceeds 0.1");
  }
  std::vector<std::string> warnings;
  if (ratio > 0.02) warnings.push_back("dt*max(nu, kappa, Gamma) = " + fmt(ratio) + " > 0.02");
  return warnings;
}

TrajectoryRecord run_trajectory(const SystemParams& p, const FockBasisSpec& spec,
                                const IntegratorConfig& cfg, bool with_feedback,
                                const TrajectoryOptions& opts) {
  if (cfg.record_every < 1) throw Error(ErrorKind::config, "record_every must be >= 1");
  TrajectoryRecord rec;
  rec.seed = cfg.seed;
  rec.stream = opts.stream;
  rec.warnings = check_stochastic_step(p, cfg.step_size(), with_feedback);

  const int n_steps = cfg.steps();
  const double h = cfg.step_size();
  const HomodyneFilter filter(p, spec, h, cfg.scheme);
  const NoiseStream noise(cfg.seed, opts.stream, opts.antithetic);
  const double sqrt_dt = std::sqrt(h);

  const CMatrix x = quadrature(spec, Quadrature::position).matrix();
  const CMatrix pm = quadrature(spec, Quadrature::momentum).matrix();
  const CMatrix num = number(spec).matrix();
  auto mean = [](const CMatrix& rho, const CMatrix& op) {
    return (rho.array() * op.transpose().array()).sum().real();
  };

  CMatrix rho = thermal_state(spec, p.n0).matrix();
  double current_sum = 0.0;
  int current_steps = 0;

  auto record = [&](double t) {
    const double tail = top_population(DenseOperator(rho), spec.dim());
    if (tail > cfg.tail_guard) {
      throw Error(ErrorKind::tail_too_heavy,
                  "trajectory " + std::to_string(opts.stream) + ": top-level population " +
                      fmt(tail) + " at t=" + fmt(t));
    }
    rec.times.push_back(t);
    rec.x_cond.push_back(mean(rho, x));
    rec.p_cond.push_back(mean(rho, pm));
    rec.n_cond.push_back(mean(rho, num));
    rec.current.push_back(current_steps > 0 ? current_sum / (current_steps * h) : 0.0);
    current_sum = 0.0;
    current_steps = 0;
  };

  auto check = [&](double trace_before) {
    TrajectoryDiagnostics& dg = rec.diagnostics;
    if (cfg.scheme == Scheme::euler_maruyama) {
      dg.max_trace_error = std::max(dg.max_trace_error, std::abs(trace_before - 1.0));
    }
    dg.max_hermiticity_error =
        std::max(dg.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    dg.min_eigenvalue = std::min(dg.min_eigenvalue, min_eigenvalue(DenseOperator(rho)));
    const double mx = mean(rho, x);
    const double mp = mean(rho, pm);
    const double var_x = mean(rho, x * x) - mx * mx;
    const double var_p = mean(rho, pm * pm) - mp * mp;
    dg.min_uncertainty_product = std::min(dg.min_uncertainty_product, var_x * var_p);
  };

  record(0.0);
  for (int step = 1; step <= n_steps; ++step) {
    const double dw = sqrt_dt * noise.normal(static_cast<std::uint64_t>(step));
    double trace_before = 1.0;
    const double di = filter.measure(rho, dw, &trace_before);
    if (with_feedback) filter.feedback(rho, di);
    current_sum += di;
    ++current_steps;
    if (opts.check_invariants) check(trace_before);
    if (step % cfg.record_every == 0 || step == n_steps) record(step * h);
  }
  rec.final_state = clip_negative(DenseOperator(std::move(rho)));
  return rec;
}

}  // namespace trapcool
