#pragma once

// Cross-checks between the closed-form theory, the Lindblad integrator, the
// trajectory unraveling and the full meter models. Used by `trapcool
// validate` and by the acceptance binary.

#include <functional>
#include <string>
#include <vector>

#include "trapcool/gaussian.hpp"
#include "trapcool/models.hpp"

namespace trapcool {

enum class ValidationLevel { fast, full };

ValidationLevel parse_validation_level(const std::string& s);

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

/// Formula entry points used by the checks; tests replace them to make sure
/// a wrong formula is caught.
struct ValidationHooks {
  std::function<BathParams(const SystemParams&)> bath = [](const SystemParams& p) {
    return bath_params(p);
  };
};

/// Worst invariant values seen over every recorded integrator state.
struct InvariantLog {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;
  double min_uncertainty_product = 1.0;  // stochastic runs only
  long long states = 0;
  std::vector<std::string> sources;

  void add_state(const DenseOperator& rho, double trace_error);
  bool ok() const;
};

struct ValidationContext {
  ValidationHooks hooks;
  int jobs = 0;
  InvariantLog invariants;
};

/// Parameters used by the integrator checks: default rates with ν = 50 g.
SystemParams rescaled_params();

CheckResult check_fig1(ValidationContext& ctx);
CheckResult check_formula_vs_integrator(ValidationContext& ctx);
CheckResult check_unraveling(ValidationContext& ctx, int n_traj = 200);
CheckResult check_adiabatic(ValidationContext& ctx, MeterCase which);
CheckResult check_optimal_gain(ValidationContext& ctx);
CheckResult check_bath_physicality(ValidationContext& ctx);
CheckResult check_stability_equivalence(ValidationContext& ctx);
CheckResult check_quantum_limit(ValidationContext& ctx);
/// Summarizes ctx.invariants collected by the integrator checks run before it.
CheckResult check_integrator_invariants(ValidationContext& ctx);

/// fast: criteria 1, 2, 5 and the property checks; full adds the trajectory
/// ensemble and the bipartite steady states. `on_result` sees each check as
/// soon as it finishes.
std::vector<CheckResult> run_validation(ValidationLevel level, ValidationContext& ctx,
                                        const std::function<void(const CheckResult&)>& on_result = nullptr);

}  // namespace trapcool
