#pragma once

// Closed-form steady-state theory of the feedback master equation: effective
// squeezed-bath parameters, stationary Gaussian moments, stability, the
// optimal gain and phase-space uncertainty ellipses.

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "trapcool/models.hpp"

namespace trapcool {

struct BathParams {
  double gamma = 0.0;  // Γ = −g sinφ
  double n = 0.0;      // effective occupancy N
  cplx m{0.0, 0.0};    // squeezing parameter M

  /// |M|² ≤ N(N+1) + tol.
  bool physical(double tol = 1e-12) const { return std::norm(m) <= n * (n + 1.0) + tol; }
};

/// Stationary moments: ζ = ⟨a†a⟩ and μ = ⟨a²⟩ (so ⟨a†²⟩ = μ*).
struct StationaryMoments {
  double zeta = 0.0;
  cplx mu{0.0, 0.0};
};

struct WignerEllipse {
  double sigma_xx = 0.25;
  double sigma_pp = 0.25;
  double sigma_xp = 0.0;
  std::array<double, 2> semi_axes{0.5, 0.5};  // major, minor
  double tilt = 0.0;                           // angle of the major axis

  double area() const;
  double min_variance() const { return semi_axes[1] * semi_axes[1]; }
};

struct OptimalGain {
  double g_opt = 0.0;
  double n_min = 0.0;
};

/// Throws invalid_feedback_phase when g sinφ = 0.
BathParams bath_params(const SystemParams& p);

/// N as a function of the gain, other parameters fixed.
double effective_occupancy(const SystemParams& p);

/// g sinφ < 0.
bool stability(const SystemParams& p);

/// Throws unstable unless stability(p).
StationaryMoments stationary_moments(const SystemParams& p);

/// Same, from externally supplied bath parameters.
StationaryMoments stationary_moments(const SystemParams& p, const BathParams& b);

/// Gain minimizing N at φ = −π/2 and the corresponding N.
OptimalGain optimal_gain(const SystemParams& p);

/// Covariance of (X, P) under the Wigner function and the 1/√e contour
/// geometry. Throws non_positive_covariance.
WignerEllipse wigner_covariance(const StationaryMoments& m);

/// Thermal state with occupancy n: ζ = n, μ = 0.
inline StationaryMoments thermal_moments(double n) { return {n, cplx{0.0, 0.0}}; }

/// `n_points` samples of the ellipse boundary q Σ⁻¹ q = 1 (not repeating the
/// first point), parameterized on the principal axes and rotated by the tilt.
std::vector<std::pair<double, double>> contour_polyline(const WignerEllipse& e, int n_points);

}  // namespace trapcool
