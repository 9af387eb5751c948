#include "trapcool/models.hpp"

#include <cmath>
#include <sstream>

#include "trapcool/errors.hpp"
#include "trapcool/gaussian.hpp"

namespace trapcool {

namespace {

constexpr cplx kI{0.0, 1.0};

DenseOperator ket_bra(int dim, int row, int col) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return DenseOperator(std::move(m));
}

/// 2AρB − BAρ − ρBA
Superoperator bath_term(const DenseOperator& a, const DenseOperator& b, SpaceLayout layout) {
  const DenseOperator ba = b * a;
  Superoperator s = cplx(2.0) * sandwich(a, b, layout);
  s += cplx(-1.0) * spre(ba, layout);
  s += cplx(-1.0) * spost(ba, layout);
  return s;
}

void require_measurement_for_feedback(const SystemParams& p) {
  if (p.g != 0.0 && !(p.measurement_rate() > 0.0)) {
    throw Error(ErrorKind::config, "feedback (g != 0) requires chi > 0 and kappa > 0");
  }
}

/// −i[F, c ρ + ρ c†] + (1/η) D[F]: Markovian feedback of the homodyne current
/// of the meter output c through the Hamiltonian F.
Superoperator current_feedback(const DenseOperator& f, const DenseOperator& c, double eta,
                               SpaceLayout layout) {
  Superoperator record = spre(c, layout);
  record += spost(c.adjoint(), layout);
  Superoperator s = hamiltonian_super(f, layout) * record;
  s += cplx(1.0 / eta) * lindblad_dissipator(f, layout);
  return s;
}

}  // namespace

SystemParams SystemParams::fig1() { return SystemParams{}; }

std::vector<std::string> SystemParams::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorKind::config, key + ": " + why);
  };
  const std::pair<const char*, double> rates[] = {
      {"chi", chi}, {"kappa", kappa}, {"gamma_h", gamma_h}, {"nu", nu},
      {"epsilon", epsilon}, {"beta_mag", beta_mag}, {"n0", n0}};
  for (const auto& [key, value] : rates) {
    if (!std::isfinite(value)) fail(key, "must be finite");
    if (value < 0.0) fail(key, "must be >= 0");
  }
  if (!std::isfinite(g)) fail("g", "must be finite");
  if (!std::isfinite(phi)) fail("phi", "must be finite");
  if (!std::isfinite(delta_internal)) fail("delta_internal", "must be finite");
  if (!(eta > 0.0 && eta <= 1.0)) fail("eta", "must lie in (0, 1]");
  if (!(lamb_dicke > 0.0)) fail("lamb_dicke", "must be > 0");
  if (lamb_dicke > 0.25) fail("lamb_dicke", "must be <= 0.25 (Lamb-Dicke regime)");

  std::vector<std::string> warnings;
  if (lamb_dicke > 0.1) {
    warnings.push_back("lamb_dicke > 0.1: first-order Lamb-Dicke expansion is marginal");
  }
  if (kappa > 0.0) {
    const double ratio = std::abs(chi) / kappa;
    if (ratio > 0.25) {
      warnings.push_back("chi/kappa > 0.25: outside the adiabatic regime");
    } else if (ratio > 0.1) {
      warnings.push_back("chi/kappa > 0.1: adiabatic elimination is marginal");
    }
  }
  return warnings;
}

double resonant_coupling(const SystemParams& p) {
  return 2.0 * p.epsilon * p.beta_mag * p.lamb_dicke;
}

double offresonant_coupling(const SystemParams& p) {
  if (p.delta_internal == 0.0) {
    throw Error(ErrorKind::config, "delta_internal must be non-zero for the off-resonant coupling");
  }
  return -4.0 * p.beta_mag * p.lamb_dicke * p.epsilon * p.epsilon / p.delta_internal;
}

Superoperator heating_liouvillian(const FockBasisSpec& spec, double gamma_h) {
  const SpaceLayout layout{spec.dim(), 1};
  const DenseOperator a = annihilation(spec);
  Superoperator l = lindblad_dissipator(a, layout);
  l += lindblad_dissipator(a.adjoint(), layout);
  return cplx(gamma_h) * l;
}

Superoperator measurement_liouvillian(const SystemParams& p, const FockBasisSpec& spec) {
  const SpaceLayout layout{spec.dim(), 1};
  Superoperator l = hamiltonian_super(cplx(p.nu) * number(spec), layout);
  l += heating_liouvillian(spec, p.gamma_h);
  const double k = p.measurement_rate();
  if (k > 0.0) {
    // −(k/2)[X,[X,ρ]] = k D[X]ρ for Hermitian X.
    l += cplx(k) * lindblad_dissipator(quadrature(spec, Quadrature::position), layout);
  }
  return l;
}

Superoperator reduced_feedback_liouvillian_direct(const SystemParams& p,
                                                  const FockBasisSpec& spec) {
  require_measurement_for_feedback(p);
  Superoperator l = measurement_liouvillian(p, spec);
  if (p.g == 0.0) return l;

  const SpaceLayout layout{spec.dim(), 1};
  const DenseOperator x = quadrature(spec, Quadrature::position);
  const DenseOperator pm = quadrature(spec, Quadrature::momentum);
  const double k = p.measurement_rate();

  const Superoperator feedback = cplx(0.0, p.g) * commutator_super(pm, layout);
  Superoperator record = (kI * std::exp(kI * p.phi)) * spost(x, layout);
  record += (-kI * std::exp(-kI * p.phi)) * spre(x, layout);
  l += feedback * record;
  l += cplx(1.0 / (2.0 * p.eta * k)) * (feedback * feedback);
  return l;
}

Superoperator reduced_feedback_liouvillian(const SystemParams& p, const FockBasisSpec& spec) {
  require_measurement_for_feedback(p);
  if (p.g == 0.0) return reduced_feedback_liouvillian_direct(p, spec);

  const BathParams bath = bath_params(p);  // throws on sinφ = 0
  const SpaceLayout layout{spec.dim(), 1};
  const DenseOperator a = annihilation(spec);
  const DenseOperator ad = a.adjoint();
  const double half_gamma = 0.5 * bath.gamma;

  Superoperator l = cplx(half_gamma * (bath.n + 1.0)) * bath_term(a, ad, layout);
  l += cplx(half_gamma * bath.n) * bath_term(ad, a, layout);
  l += (-half_gamma * bath.m) * bath_term(ad, ad, layout);
  l += (-half_gamma * std::conj(bath.m)) * bath_term(a, a, layout);
  l += cplx(-0.25 * p.g * std::sin(p.phi)) * commutator_super(a * a - ad * ad, layout);
  l += hamiltonian_super(cplx(p.nu) * number(spec), layout);
  return l;
}

Superoperator resonant_full_liouvillian(const SystemParams& p, const FockBasisSpec& spec) {
  require_measurement_for_feedback(p);
  const SpaceLayout layout{spec.dim(), 2};
  const TwoLevelOps tl = two_level_ops();
  const DenseOperator id_m = DenseOperator::identity(2);
  const DenseOperator id_v = DenseOperator::identity(spec.dim());
  const DenseOperator a = tensor(annihilation(spec), id_m);
  const DenseOperator x = tensor(quadrature(spec, Quadrature::position), id_m);
  const DenseOperator sm = tensor(id_v, tl.sigma_minus);

  const DenseOperator h =
      cplx(p.nu) * tensor(number(spec), id_m) + cplx(0.5 * p.chi) * (x * tensor(id_v, tl.sigma_x));
  Superoperator l = hamiltonian_super(h, layout);
  l += cplx(p.kappa) * lindblad_dissipator(sm, layout);
  l += cplx(p.gamma_h) * lindblad_dissipator(a, layout);
  l += cplx(p.gamma_h) * lindblad_dissipator(a.adjoint(), layout);
  if (p.g != 0.0) {
    const DenseOperator f = cplx(-p.g / std::sqrt(p.measurement_rate())) *
                            tensor(quadrature(spec, Quadrature::momentum), id_m);
    const DenseOperator c = cplx(std::sqrt(p.kappa)) * std::exp(-kI * p.phi) * sm;
    l += current_feedback(f, c, p.eta, layout);
  }
  return l;
}

Superoperator offresonant_full_liouvillian(const SystemParams& p, const FockBasisSpec& spec_vib,
                                           const FockBasisSpec& spec_field) {
  require_measurement_for_feedback(p);
  if (spec_field.n_trunc < 2) {
    throw Error(ErrorKind::config, "field truncation must retain |2> (n_trunc >= 2)");
  }
  const SpaceLayout layout{spec_vib.dim(), spec_field.dim()};
  const DenseOperator id_f = DenseOperator::identity(spec_field.dim());
  const DenseOperator id_v = DenseOperator::identity(spec_vib.dim());
  const DenseOperator a = tensor(annihilation(spec_vib), id_f);
  const DenseOperator x = tensor(quadrature(spec_vib, Quadrature::position), id_f);
  const DenseOperator b = tensor(id_v, annihilation(spec_field));
  const DenseOperator y = tensor(id_v, quadrature(spec_field, Quadrature::position));

  const DenseOperator h = cplx(p.nu) * tensor(number(spec_vib), id_f) + cplx(p.chi) * (x * y);
  Superoperator l = hamiltonian_super(h, layout);
  l += cplx(p.kappa) * lindblad_dissipator(b, layout);
  l += cplx(p.gamma_h) * lindblad_dissipator(a, layout);
  l += cplx(p.gamma_h) * lindblad_dissipator(a.adjoint(), layout);
  if (p.g != 0.0) {
    const DenseOperator f = cplx(-p.g / std::sqrt(p.measurement_rate())) *
                            tensor(quadrature(spec_vib, Quadrature::momentum), id_f);
    const DenseOperator c = cplx(std::sqrt(p.kappa)) * std::exp(-kI * p.phi) * b;
    l += current_feedback(f, c, p.eta, layout);
  }
  return l;
}

DenseOperator adiabatic_expansion(const DenseOperator& rho, const SystemParams& p,
                                  MeterCase which, int meter_dim) {
  const int n = rho.dim();
  const FockBasisSpec vib{n - 1, 0.5};
  const DenseOperator x = quadrature(vib, Quadrature::position);
  const cplx eps = p.chi / p.kappa;
  const DenseOperator x_rho = x * rho;
  const DenseOperator rho_x = rho * x;

  if (which == MeterCase::resonant) {
    if (meter_dim != 2) throw Error(ErrorKind::dimension_mismatch, "two-level meter has dim 2");
    // Basis index 0 = |−⟩, 1 = |+⟩.
    DenseOperator d = tensor(rho, ket_bra(2, 0, 0));
    d += (-kI * eps) * (tensor(x_rho, ket_bra(2, 1, 0)) - tensor(rho_x, ket_bra(2, 0, 1)));
    return d;
  }

  if (meter_dim < 3) {
    throw Error(ErrorKind::dimension_mismatch, "field expansion needs levels up to |2>");
  }
  const DenseOperator x_rho_x = x_rho * x;
  const cplx eps2 = eps * eps;
  DenseOperator d = tensor(rho - eps2 * x_rho_x, ket_bra(meter_dim, 0, 0));
  d += (-kI * eps) *
       (tensor(x_rho, ket_bra(meter_dim, 1, 0)) - tensor(rho_x, ket_bra(meter_dim, 0, 1)));
  d += eps2 * tensor(x_rho_x, ket_bra(meter_dim, 1, 1));
  d += (-eps2 / std::sqrt(2.0)) * (tensor(x * x_rho, ket_bra(meter_dim, 2, 0)) +
                                   tensor(rho_x * x, ket_bra(meter_dim, 0, 2)));
  return d;
}

double adiabatic_expansion_residual(const DenseOperator& d_ss, const SystemParams& p,
                                    MeterCase which, int meter_dim) {
  if (meter_dim <= 0 || d_ss.dim() % meter_dim != 0) {
    throw Error(ErrorKind::dimension_mismatch, "joint state does not factor over the meter");
  }
  const int vib_dim = d_ss.dim() / meter_dim;
  const DenseOperator rho = partial_trace_meter(d_ss, vib_dim, meter_dim);
  return trace_norm_hermitian(d_ss - adiabatic_expansion(rho, p, which, meter_dim));
}

DenseOperator meter_quadrature(const SystemParams& p, MeterCase which, int vib_dim,
                               int meter_dim) {
  const DenseOperator id_v = DenseOperator::identity(vib_dim);
  if (which == MeterCase::resonant) {
    if (meter_dim != 2) throw Error(ErrorKind::dimension_mismatch, "two-level meter has dim 2");
    const TwoLevelOps tl = two_level_ops();
    return tensor(id_v, std::exp(-kI * p.phi) * tl.sigma_minus + std::exp(kI * p.phi) * tl.sigma_plus);
  }
  const DenseOperator b = annihilation(FockBasisSpec{meter_dim - 1, 0.5});
  return tensor(id_v, 0.5 * (std::exp(-kI * p.phi) * b + std::exp(kI * p.phi) * b.adjoint()));
}

Eigen::Matrix2cd moment_drift(const Superoperator& l) {
  const SpaceLayout& layout = l.layout();
  if (layout.meter_dim != 1) {
    throw Error(ErrorKind::dimension_mismatch, "moment drift is defined for reduced generators");
  }
  if (layout.vib_dim < 4) {
    throw Error(ErrorKind::dimension_mismatch, "moment drift needs n_trunc >= 3");
  }
  const FockBasisSpec spec{layout.vib_dim - 1, 0.5};
  const DenseOperator a = annihilation(spec);
  // Heisenberg dual: Tr(A L(ρ)) = Tr(L'(A) ρ) with vec(L'(A)ᵀ) = Lᵀ vec(Aᵀ).
  auto dual = [&](const DenseOperator& op) {
    const DenseOperator op_t(op.matrix().transpose());
    const Eigen::VectorXcd v = l.matrix().transpose() * vectorize(op_t);
    return DenseOperator(unvectorize(v, l.dim()).matrix().transpose());
  };
  const DenseOperator da = dual(a);
  const DenseOperator dad = dual(a.adjoint());
  // L'(A) = α a + β a† on the interior; a has (0,1) = 1, a† has (1,0) = 1.
  Eigen::Matrix2cd drift;
  drift << da(0, 1), da(1, 0), dad(0, 1), dad(1, 0);
  return drift;
}

double drift_growth_rate(const Superoperator& l) {
  const Eigen::Matrix2cd drift = moment_drift(l);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(drift);
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace trapcool
