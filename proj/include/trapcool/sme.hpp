#pragma once

// Time evolution: deterministic integration of any generator, stationary
// states, and the conditioned (homodyne-filtered) reduced dynamics with
// Markovian current feedback.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trapcool/hilbert.hpp"
#include "trapcool/models.hpp"
#include "trapcool/noise.hpp"
#include "trapcool/superop.hpp"

namespace trapcool {

enum class Scheme {
  euler_maruyama,      // literal Ito–Euler update of the conditioned equation
  kraus_euler,         // same first-order update in completely positive form
  heun_deterministic,  // RK2 for deterministic generators
  rk4_deterministic,
};

const char* to_string(Scheme s);

struct IntegratorConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  Scheme scheme = Scheme::rk4_deterministic;
  std::uint64_t seed = 1;
  bool renormalize = true;
  double tail_guard = 1e-6;  // top-two-level population limit
  int record_every = 1;

  int steps() const;
  /// dt adjusted so that steps() * dt == t_final.
  double step_size() const;
};

// ---------------------------------------------------------------------------
// Deterministic evolution

using StateObserver = std::function<void(double t, const DenseOperator& rho)>;

/// Integrates dρ/dt = L ρ. The state is re-symmetrized every step. Throws
/// step_too_large when dt·‖L‖₁ leaves the scheme's stability bound and
/// tail_too_heavy when the top two vibrational levels exceed cfg.tail_guard.
/// `observer` (optional) sees t = 0, every cfg.record_every steps, and t_final.
DenseOperator integrate_lindblad(const Superoperator& l, const DenseOperator& rho0,
                                 const IntegratorConfig& cfg,
                                 const StateObserver& observer = nullptr);

struct SteadyStateOptions {
  double tail_tolerance = 1e-6;
  double condition_limit = 1e12;
};

/// Normalized kernel of L. Throws unstable when the first-moment drift of a
/// reduced generator grows, not_unique when the kernel is degenerate, and
/// tail_too_heavy when the solution sits on the truncation edge.
DenseOperator steady_state(const Superoperator& l, const SteadyStateOptions& opts = {});

/// ‖L ρ‖∞.
double generator_residual(const Superoperator& l, const DenseOperator& rho);

// ---------------------------------------------------------------------------
// Conditioned dynamics

/// Precomputed operators for repeated homodyne/feedback steps on the reduced
/// vibrational model. With k = χ²/κ the measurement record is
///   dI = 2ηk sinφ ⟨X⟩_c dt − √(ηk) dW,
/// where dW is the increment that drives the state update, and the feedback
/// kick is exp(i g P s) ρ exp(−i g P s) with s = −dI/(ηk). Averaging over dW
/// reproduces the feedback master equation.
class HomodyneFilter {
 public:
  HomodyneFilter(const SystemParams& p, const FockBasisSpec& spec, double dt,
                 Scheme scheme = Scheme::kraus_euler);

  /// One measurement step in place; returns dI. `trace_before_norm` (optional)
  /// receives the trace prior to renormalization.
  double measure(CMatrix& rho, double dw, double* trace_before_norm = nullptr) const;

  /// Feedback kick for the current increment dI, in place.
  void feedback(CMatrix& rho, double d_current) const;

  double dt() const { return dt_; }
  double measurement_rate() const { return k_; }
  const SystemParams& params() const { return p_; }
  const FockBasisSpec& spec() const { return spec_; }

 private:
  void rotate(CMatrix& rho) const;

  SystemParams p_;
  FockBasisSpec spec_;
  double dt_;
  Scheme scheme_;
  double k_;
  CMatrix x_;
  CMatrix a_;
  CMatrix ad_;
  CMatrix drift_;      // −½(k X² + γ_h(a†a + aa†))
  CMatrix rotation_;   // e^{−iν(m−n)dt}
  CMatrix p_vecs_;     // eigenvectors of P
  Eigen::VectorXd p_vals_;
};

struct HomodyneStep {
  DenseOperator rho;
  double d_current = 0.0;
};

HomodyneStep homodyne_step(const DenseOperator& rho_c, double dw, const SystemParams& p,
                           const FockBasisSpec& spec, double dt,
                           Scheme scheme = Scheme::kraus_euler);

DenseOperator feedback_step(const DenseOperator& rho_c, double d_current, const SystemParams& p,
                            const FockBasisSpec& spec);

struct TrajectoryDiagnostics {
  double max_trace_error = 0.0;       // |Tr − 1| before renormalization
  double min_eigenvalue = 1.0;
  double max_hermiticity_error = 0.0;
  double min_uncertainty_product = 1.0;  // Var(X)·Var(P)
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> x_cond;
  std::vector<double> p_cond;
  std::vector<double> n_cond;
  std::vector<double> current;  // mean I(t) over the preceding record interval
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  DenseOperator final_state;
  TrajectoryDiagnostics diagnostics;
  std::vector<std::string> warnings;
};

struct TrajectoryOptions {
  std::uint64_t stream = 0;
  bool antithetic = false;
  bool check_invariants = false;
};

/// Deterministic function of (params, spec, cfg, options). Starts from the
/// thermal state with occupancy p.n0 and alternates measurement and (when
/// requested) feedback steps.
TrajectoryRecord run_trajectory(const SystemParams& p, const FockBasisSpec& spec,
                                const IntegratorConfig& cfg, bool with_feedback,
                                const TrajectoryOptions& opts = {});

/// Throws step_too_large when dt·max(ν, κ, Γ) > 0.1; returns a warning above 0.02.
std::vector<std::string> check_stochastic_step(const SystemParams& p, double dt,
                                               bool with_feedback);

}  // namespace trapcool
