#pragma once

// Generators for the three model tiers: the full resonant model (vibration ⊗
// two-level meter), the full off-resonant model (vibration ⊗ damped field
// mode) and the reduced vibrational model with measurement and Markovian
// feedback.
//
// Rates are angular frequencies in one arbitrary unit (the bundled configs use
// kHz). Stationary occupancies depend only on rate ratios.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trapcool/hilbert.hpp"
#include "trapcool/superop.hpp"

namespace trapcool {

struct SystemParams {
  double chi = 4.0;        // effective meter coupling
  double kappa = 40.0;     // meter decay
  double gamma_h = 0.01;   // heating
  double eta = 0.9;        // detection efficiency
  double nu = 1000.0;      // trap frequency
  double g = 0.375;        // feedback gain
  double phi = -1.5707963267948966;  // homodyne phase
  double n0 = 10.0;        // initial thermal occupancy
  // Raw parameters of the unreduced couplings; only the helpers below use them.
  double epsilon = 0.0;
  double beta_mag = 0.0;
  double lamb_dicke = 0.05;
  double delta_internal = 0.0;

  /// Parameters of the phase-space contour figure (kHz units).
  static SystemParams fig1();

  /// Measurement strength χ²/κ of the reduced model.
  double measurement_rate() const { return kappa > 0.0 ? chi * chi / kappa : 0.0; }

  /// χ/κ ≤ 0.25.
  bool adiabatic_regime() const { return kappa > 0.0 && chi / kappa <= 0.25; }

  /// Throws ErrorKind::config on hard violations; returns soft warnings.
  std::vector<std::string> validate() const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// χ = 2 ε |β| kx₀ for the resonant drive.
double resonant_coupling(const SystemParams& p);
/// χ = -4 |β| kx₀ ε² / Δ for the dispersive cavity coupling.
double offresonant_coupling(const SystemParams& p);

/// (γ_h/2)(2aρa† - a†aρ - ρa†a) + (γ_h/2)(2a†ρa - aa†ρ - ρaa†).
Superoperator heating_liouvillian(const FockBasisSpec& spec, double gamma_h);

/// Rotation, heating and the (χ²/2κ) position-measurement double commutator:
/// the deterministic part of the conditioned vibrational equation.
Superoperator measurement_liouvillian(const SystemParams& p, const FockBasisSpec& spec);

/// Squeezed-bath form with Γ, N, M, the parametric term and free rotation.
/// For g = 0 the bath parameters are singular and the direct assembly is
/// returned instead. Throws invalid_feedback_phase when g ≠ 0 and sinφ = 0.
Superoperator reduced_feedback_liouvillian(const SystemParams& p, const FockBasisSpec& spec);

/// Direct assembly: measurement generator + K(i e^{iφ} ρX − i e^{−iφ} Xρ)
/// + K²ρ/(2ηχ²/κ) with Kρ = i g [P, ρ].
Superoperator reduced_feedback_liouvillian_direct(const SystemParams& p,
                                                  const FockBasisSpec& spec);

/// Atom ⊗ two-level meter: H = ν a†a + (χ/2) σx X, spontaneous emission at κ,
/// heating on the vibration and, for g ≠ 0, Markovian feedback of the
/// fluorescence homodyne current through F = -(g/√(χ²/κ)) P.
Superoperator resonant_full_liouvillian(const SystemParams& p, const FockBasisSpec& spec);

/// Atom ⊗ cavity mode: H = ν a†a + χ Y X with Y = (b + b†)/2, cavity decay at
/// κ, heating, and the same feedback coupling as the resonant model.
Superoperator offresonant_full_liouvillian(const SystemParams& p, const FockBasisSpec& spec_vib,
                                           const FockBasisSpec& spec_field);

enum class MeterCase { resonant, offresonant };

/// Adiabatic expansion of the joint state in powers of χ/κ around the meter
/// ground state, built from the reduced vibrational state ρ.
DenseOperator adiabatic_expansion(const DenseOperator& rho, const SystemParams& p,
                                  MeterCase which, int meter_dim);

/// ‖D − Expansion(Tr_meter D)‖₁.
double adiabatic_expansion_residual(const DenseOperator& d_ss, const SystemParams& p,
                                    MeterCase which, int meter_dim);

/// Homodyne observable Σ_φ = σ₋e^{−iφ} + σ₊e^{iφ} on the joint space
/// (resonant case) or Y_φ = (b e^{−iφ} + b† e^{iφ})/2 (off-resonant case).
DenseOperator meter_quadrature(const SystemParams& p, MeterCase which, int vib_dim, int meter_dim);

/// Drift matrix A of the first moments, d/dt (⟨a⟩, ⟨a†⟩)ᵀ = A (⟨a⟩, ⟨a†⟩)ᵀ,
/// read off the Heisenberg-picture action of a reduced generator on a and a†.
Eigen::Matrix2cd moment_drift(const Superoperator& l);

/// Largest real part of the moment-drift eigenvalues.
double drift_growth_rate(const Superoperator& l);

}  // namespace trapcool
