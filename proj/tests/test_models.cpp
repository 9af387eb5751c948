#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "trapcool/errors.hpp"
#include "trapcool/gaussian.hpp"
#include "trapcool/models.hpp"
#include "trapcool/sme.hpp"

using namespace trapcool;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

SystemParams weak_meter(double chi_over_kappa) {
  SystemParams p;
  p.kappa = 1.0;
  p.chi = chi_over_kappa;
  const double k = p.measurement_rate();
  p.nu = 4.0 * k;
  p.gamma_h = 0.05 * k;
  p.phi = -kPi / 2.0;
  p.g = optimal_gain(p).g_opt;
  return p;
}

// ρ supported on levels 0..n_trunc-2 so that [a, a†] = 1 holds wherever the
// generators act.
DenseOperator interior_density(int dim, std::mt19937& rng) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m.topLeftCorner(dim - 2, dim - 2) = random_density(dim - 2, rng).matrix();
  return DenseOperator(m);
}

double relative_diff(const DenseOperator& a, const DenseOperator& b) {
  return max_diff(a.matrix(), b.matrix()) / std::max(a.max_abs(), b.max_abs());
}

}  // namespace

TEST_CASE("heating generator") {
  const FockBasisSpec spec{60, 1e-8};
  CHECK(heating_liouvillian(spec, 0.0).max_abs() == 0.0);

  const double gamma_h = 0.3;
  const Superoperator l = heating_liouvillian(spec, gamma_h);
  const DenseOperator rho = thermal_state(spec, 2.0);
  CHECK(expectation(l.apply(rho), number(spec)).real() == doctest::Approx(gamma_h).epsilon(1e-9));

  std::mt19937 rng(5);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(l.apply(random_density(61, rng)).trace()) < 1e-12);
  }
}

TEST_CASE("every generator preserves trace and Hermiticity") {
  const FockBasisSpec spec{8, 1e-8};
  SystemParams p;
  p.nu = 3.0;
  const std::vector<Superoperator> gens = {
      heating_liouvillian(spec, 0.2),
      measurement_liouvillian(p, spec),
      reduced_feedback_liouvillian(p, spec),
      reduced_feedback_liouvillian_direct(p, spec),
      resonant_full_liouvillian(p, spec),
      offresonant_full_liouvillian(p, spec, FockBasisSpec{3, 1e-8}),
  };
  for (const auto& l : gens) {
    CHECK(l.trace_defect() <= 1e-10);
    CHECK(l.hermiticity_defect(100, 7) <= 1e-10);
  }
}

TEST_CASE("resonant model: free internal decay and free rotation") {
  SystemParams p;
  p.chi = 0.0;
  p.g = 0.0;
  p.gamma_h = 0.0;
  p.kappa = 2.0;
  p.nu = 1.5;
  const FockBasisSpec spec{6, 1e-8};
  const Superoperator l = resonant_full_liouvillian(p, spec);
  const TwoLevelOps tl = two_level_ops();
  const DenseOperator excited = tl.sigma_plus * tl.sigma_minus;
  const DenseOperator rho0 = tensor(coherent_state(7, cplx(0.4, 0.1)), excited);
  const DenseOperator a = tensor(annihilation(spec), DenseOperator::identity(2));
  const DenseOperator pop = tensor(DenseOperator::identity(7), excited);
  const cplx a0 = expectation(rho0, a);

  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  cfg.tail_guard = 1.0;
  const DenseOperator rho = integrate_lindblad(l, rho0, cfg);
  CHECK(expectation(rho, pop).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));
  CHECK(std::abs(expectation(rho, a) - a0 * std::exp(cplx(0, -1.5))) < 1e-8);
}

TEST_CASE("resonant model: meter quadrature follows the vibration adiabatically") {
  SystemParams p;
  p.kappa = 1.0;
  p.chi = 0.05;
  p.nu = 1e-3;
  p.gamma_h = 0.0;
  p.g = 0.0;
  p.phi = -kPi / 2.0;
  const FockBasisSpec spec{20, 1e-8};
  const Superoperator l = resonant_full_liouvillian(p, spec);
  const TwoLevelOps tl = two_level_ops();
  const DenseOperator rho0 = tensor(coherent_state(21, 1.0), tl.sigma_minus * tl.sigma_plus);

  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 10.0;
  cfg.tail_guard = 1.0;
  const DenseOperator d = integrate_lindblad(l, rho0, cfg);
  const double x = expectation(d, tensor(quadrature(spec, Quadrature::position),
                                         DenseOperator::identity(2))).real();
  const double sigma = expectation(d, meter_quadrature(p, MeterCase::resonant, 21, 2)).real();
  const double expected = -2.0 * (p.chi / p.kappa) * std::sin(p.phi) * x;
  CHECK(x > 0.9);
  CHECK(std::abs(sigma - expected) <= 0.05 * std::abs(expected));
}

TEST_CASE("off-resonant model: field decay and stationary field population") {
  SystemParams p;
  p.chi = 0.0;
  p.g = 0.0;
  p.gamma_h = 0.0;
  p.kappa = 1.0;
  p.nu = 0.3;
  const FockBasisSpec vib{4, 1e-8}, field{3, 1e-8};
  const DenseOperator nb = tensor(DenseOperator::identity(5), number(field));
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 2.0;
  cfg.tail_guard = 1.0;
  const DenseOperator rho = integrate_lindblad(offresonant_full_liouvillian(p, vib, field),
                                               tensor(fock_state(vib, 0), fock_state(field, 1)), cfg);
  CHECK(expectation(rho, nb).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));

  const SystemParams q = weak_meter(0.05);
  const FockBasisSpec v25{25, 1e-8};
  const DenseOperator d = steady_state(offresonant_full_liouvillian(q, v25, field));
  const DenseOperator red = partial_trace_meter(d, 26, 4);
  const DenseOperator x = quadrature(v25, Quadrature::position);
  const double predicted = std::pow(q.chi / q.kappa, 2) * expectation(red, x * x).real();
  const double field_pop =
      expectation(d, tensor(DenseOperator::identity(26), number(field))).real();
  CHECK(std::abs(field_pop - predicted) <= 0.1 * predicted);
}

TEST_CASE("full models reproduce the reduced stationary moments") {
  const SystemParams p = weak_meter(0.05);
  const FockBasisSpec spec{25, 1e-8};
  const DenseOperator red = steady_state(reduced_feedback_liouvillian(p, spec));
  const double n_red = expectation(red, number(spec)).real();
  const DenseOperator res = partial_trace_meter(steady_state(resonant_full_liouvillian(p, spec)), 26, 2);
  const DenseOperator off = partial_trace_meter(
      steady_state(offresonant_full_liouvillian(p, spec, FockBasisSpec{3, 1e-8})), 26, 4);
  CHECK(std::abs(expectation(res, number(spec)).real() - n_red) <= 0.05 * n_red);
  CHECK(std::abs(expectation(off, number(spec)).real() - n_red) <= 0.05 * n_red);
}

TEST_CASE("reduced generator: degenerate limits and default occupancy") {
  const FockBasisSpec spec{10, 1e-8};
  SystemParams p;
  p.g = 0.0;
  p.chi = 0.0;
  p.gamma_h = 0.0;
  p.nu = 2.0;
  const Superoperator rot = hamiltonian_super(p.nu * number(spec), SpaceLayout{11, 1});
  CHECK((reduced_feedback_liouvillian(p, spec).matrix() - rot.matrix()).norm() < 1e-14);

  const FockBasisSpec s30{30, 1e-8};
  const DenseOperator rho = steady_state(reduced_feedback_liouvillian(SystemParams::fig1(), s30));
  CHECK(expectation(rho, number(s30)).real() == doctest::Approx(0.0538).epsilon(2e-3));

  SystemParams bad = SystemParams::fig1();
  bad.phi = 0.0;
  CHECK_THROWS_AS(reduced_feedback_liouvillian(bad, spec), Error);
}

TEST_CASE("squeezed-bath form equals the direct assembly") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FockBasisSpec spec{12, 1e-8};
  for (int trial = 0; trial < 20; ++trial) {
    SystemParams p;
    p.chi = 0.5 + 4.5 * u(rng);
    p.kappa = 20.0 + 80.0 * u(rng);
    p.gamma_h = 0.1 * u(rng);
    p.eta = 0.1 + 0.9 * u(rng);
    p.nu = 1.0 + 49.0 * u(rng);
    p.g = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + u(rng));
    do {
      p.phi = 2.0 * kPi * u(rng) - kPi;
    } while (std::abs(std::sin(p.phi)) < 0.1);

    const Superoperator a = reduced_feedback_liouvillian(p, spec);
    const Superoperator b = reduced_feedback_liouvillian_direct(p, spec);
    for (int k = 0; k < 3; ++k) {
      const DenseOperator rho = interior_density(13, rng);
      CHECK(relative_diff(a.apply(rho), b.apply(rho)) <= 1e-10);
    }
  }
}

TEST_CASE("first-moment drift of the reduced generator") {
  const FockBasisSpec spec{8, 1e-8};
  for (double phi : {-kPi / 2.0, -kPi / 3.0, 2.0}) {
    SystemParams p;
    p.nu = 0.7;
    p.g = 0.9;
    p.phi = phi;
    const double s = p.g * std::sin(p.phi);
    const cplx root = std::sqrt(cplx(s * s / 4.0 - p.nu * p.nu));
    const Eigen::Matrix2cd drift = moment_drift(reduced_feedback_liouvillian(p, spec));
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(drift);
    const double expected = s / 2.0 + root.real();  // −Γ/2 + Re√(...)
    CHECK(es.eigenvalues().real().maxCoeff() == doctest::Approx(expected).epsilon(1e-10));
    CHECK((drift_growth_rate(reduced_feedback_liouvillian(p, spec)) < 0.0) == stability(p));
  }
}

TEST_CASE("heating alone ramps the occupancy linearly") {
  const FockBasisSpec spec{80, 1e-8};
  SystemParams p;
  p.chi = 0.0;
  p.g = 0.0;
  p.gamma_h = 0.2;
  p.nu = 1.0;
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 2.5;  // γ_h t = 0.5
  cfg.record_every = 25;
  const DenseOperator n = number(spec);
  int checked = 0;
  integrate_lindblad(reduced_feedback_liouvillian(p, spec), thermal_state(spec, 1.0), cfg,
                     [&](double t, const DenseOperator& rho) {
                       CHECK(expectation(rho, n).real() ==
                             doctest::Approx(1.0 + p.gamma_h * t).epsilon(1e-8));
                       ++checked;
                     });
  CHECK(checked == 11);
}

TEST_CASE("adiabatic expansion residual") {
  std::mt19937 rng(9);
  const DenseOperator rho = random_density(6, rng);
  SystemParams p;
  p.chi = 0.0;
  const TwoLevelOps tl = two_level_ops();
  const DenseOperator d_res = tensor(rho, tl.sigma_minus * tl.sigma_plus);
  CHECK(adiabatic_expansion_residual(d_res, p, MeterCase::resonant, 2) < 1e-14);
  const DenseOperator d_off = tensor(rho, fock_state(FockBasisSpec{3, 1e-8}, 0));
  CHECK(adiabatic_expansion_residual(d_off, p, MeterCase::offresonant, 4) < 1e-14);
  CHECK_THROWS_AS(adiabatic_expansion_residual(d_res, p, MeterCase::offresonant, 2), Error);

  // The field expansion stops at |2⟩: one more field level barely matters.
  const SystemParams q = weak_meter(0.05);
  const FockBasisSpec vib{20, 1e-8};
  const double r2 = adiabatic_expansion_residual(
      steady_state(offresonant_full_liouvillian(q, vib, FockBasisSpec{2, 1e-8})), q,
      MeterCase::offresonant, 3);
  const double r3 = adiabatic_expansion_residual(
      steady_state(offresonant_full_liouvillian(q, vib, FockBasisSpec{3, 1e-8})), q,
      MeterCase::offresonant, 4);
  CHECK(std::abs(r3 - r2) <= 0.1 * r2);
}

TEST_CASE("parameter validation and raw couplings") {
  SystemParams p;
  CHECK(p.validate().empty());
  p.eta = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("eta"), Error);
  p = SystemParams{};
  p.kappa = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("kappa"), Error);
  p = SystemParams{};
  p.lamb_dicke = 0.3;
  CHECK_THROWS_AS(p.validate(), Error);
  p.lamb_dicke = 0.15;
  CHECK(p.validate().size() == 1);
  p = SystemParams{};
  p.chi = 12.0;
  CHECK(p.validate().size() == 1);
  CHECK_FALSE(p.adiabatic_regime());

  p = SystemParams{};
  p.epsilon = 10.0;
  p.beta_mag = 2.0;
  p.lamb_dicke = 0.1;
  CHECK(resonant_coupling(p) == doctest::Approx(4.0));
  p.delta_internal = 100.0;
  CHECK(offresonant_coupling(p) == doctest::Approx(-0.8));
}
