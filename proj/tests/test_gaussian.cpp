#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "trapcool/errors.hpp"
#include "trapcool/gaussian.hpp"
#include "trapcool/sme.hpp"

using namespace trapcool;

namespace {

constexpr double kPi = std::numbers::pi;

double shoelace(const std::vector<std::pair<double, double>>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& [x0, y0] = pts[i];
    const auto& [x1, y1] = pts[(i + 1) % pts.size()];
    s += x0 * y1 - x1 * y0;
  }
  return 0.5 * std::abs(s);
}

}  // namespace

TEST_CASE("bath parameters for the default scenario") {
  const BathParams b = bath_params(SystemParams::fig1());
  CHECK(b.gamma == doctest::Approx(0.375));
  CHECK(b.n == doctest::Approx(0.05375).epsilon(1e-10));
  CHECK(b.m.real() == doctest::Approx(-0.00625).epsilon(1e-10));
  CHECK(std::abs(b.m.imag()) < 1e-15);
  CHECK(b.physical());
}

TEST_CASE("bath parameters: optimal point without heating") {
  SystemParams p;
  p.gamma_h = 0.0;
  p.eta = 0.8;
  p.g = 4.0 * std::sqrt(p.eta) * p.chi * p.chi / (4.0 * p.kappa);
  CHECK(effective_occupancy(p) == doctest::Approx(optimal_gain(p).n_min).epsilon(1e-12));

  p.phi = 0.0;
  CHECK_THROWS_AS(bath_params(p), Error);
  p.phi = -kPi / 2.0;
  p.g = 0.0;
  try {
    bath_params(p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_feedback_phase);
  }
}

TEST_CASE("stationary moments") {
  SystemParams p = SystemParams::fig1();
  p.nu = 1e4 * p.g;
  const StationaryMoments m = stationary_moments(p);
  const double n = effective_occupancy(p);
  CHECK(std::abs(m.zeta - n) <= 1e-4 * n);
  CHECK(std::abs(m.mu) <= 1e-3);

  SystemParams unstable = SystemParams::fig1();
  unstable.phi = kPi / 2.0;
  CHECK_THROWS_AS(stationary_moments(unstable), Error);
  unstable = SystemParams::fig1();
  unstable.g = -1e-9;
  CHECK_THROWS_AS(stationary_moments(unstable), Error);
}

TEST_CASE("stationary moments match the generator's kernel at nu/g = 50") {
  SystemParams p = SystemParams::fig1();
  p.nu = 50.0 * p.g;
  const FockBasisSpec spec{30, 1e-8};
  const DenseOperator rho = steady_state(reduced_feedback_liouvillian(p, spec));
  const DenseOperator a = annihilation(spec);
  const StationaryMoments m = stationary_moments(p);
  CHECK(expectation(rho, number(spec)).real() == doctest::Approx(m.zeta).epsilon(0.01));
  CHECK(std::abs(expectation(rho, a * a) - m.mu) <= 1e-3);

  // Wigner covariance against the density matrix.
  const DenseOperator x = quadrature(spec, Quadrature::position);
  const DenseOperator pq = quadrature(spec, Quadrature::momentum);
  const WignerEllipse e = wigner_covariance(m);
  const double mx = expectation(rho, x).real(), mp = expectation(rho, pq).real();
  CHECK(expectation(rho, x * x).real() - mx * mx == doctest::Approx(e.sigma_xx).epsilon(1e-8));
  CHECK(expectation(rho, pq * pq).real() - mp * mp == doctest::Approx(e.sigma_pp).epsilon(1e-8));
  CHECK(0.5 * expectation(rho, x * pq + pq * x).real() == doctest::Approx(e.sigma_xp).epsilon(1e-6));
}

TEST_CASE("stability condition") {
  SystemParams p;
  p.phi = -kPi / 2.0;
  p.g = 0.3;
  CHECK(stability(p));
  p.phi = kPi / 2.0;
  CHECK_FALSE(stability(p));
  p.g = 0.0;
  CHECK_FALSE(stability(p));
}

TEST_CASE("optimal gain") {
  SystemParams p = SystemParams::fig1();
  const OptimalGain og = optimal_gain(p);
  CHECK(og.g_opt == doctest::Approx(0.397995).epsilon(1e-5));
  CHECK(og.n_min == doctest::Approx(0.0527708).epsilon(1e-5));
  p.g = og.g_opt;
  CHECK(effective_occupancy(p) == doctest::Approx(og.n_min).epsilon(1e-12));

  // Brute-force scan over two decades either side.
  double best = 1e300, best_g = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    p.g = og.g_opt * std::pow(10.0, -2.0 + 4.0 * i / 4000.0);
    if (effective_occupancy(p) < best) {
      best = effective_occupancy(p);
      best_g = p.g;
    }
  }
  CHECK(best == doctest::Approx(og.n_min).epsilon(1e-3));
  CHECK(best_g == doctest::Approx(og.g_opt).epsilon(1e-3));

  SystemParams ideal;
  ideal.gamma_h = 0.0;
  ideal.eta = 1.0;
  CHECK(optimal_gain(ideal).n_min == 0.0);
  ideal.chi = 0.0;
  CHECK_THROWS_AS(optimal_gain(ideal), Error);
}

TEST_CASE("monotonicity of the occupancy") {
  SystemParams p = SystemParams::fig1();
  double prev = 1e300;
  for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    p.eta = eta;
    CHECK(effective_occupancy(p) < prev);
    prev = effective_occupancy(p);
  }
  p = SystemParams::fig1();
  prev = -1.0;
  for (double gh : {0.0, 0.01, 0.1, 1.0}) {
    p.gamma_h = gh;
    CHECK(optimal_gain(p).n_min > prev);
    prev = optimal_gain(p).n_min;
  }
}

TEST_CASE("large trap frequency: zeta -> N with O(g/nu) corrections") {
  SystemParams p = SystemParams::fig1();
  double prev_gap = 1e300;
  for (double ratio : {10.0, 100.0, 1000.0, 10000.0}) {
    p.nu = ratio * p.g;
    const double gap = std::abs(stationary_moments(p).zeta - effective_occupancy(p));
    CHECK(gap <= 2.0 / ratio);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("Wigner ellipses") {
  const WignerEllipse ground = wigner_covariance(thermal_moments(0.0));
  CHECK(ground.semi_axes[0] == doctest::Approx(0.5));
  CHECK(ground.semi_axes[1] == doctest::Approx(0.5));
  CHECK(ground.tilt == 0.0);

  const WignerEllipse hot = wigner_covariance(thermal_moments(10.0));
  CHECK(hot.semi_axes[0] == doctest::Approx(std::sqrt(21.0) / 2.0));
  const FockBasisSpec spec{300, 1e-8};
  const DenseOperator x = quadrature(spec, Quadrature::position);
  CHECK(expectation(thermal_state(spec, 10.0), x * x).real() ==
        doctest::Approx(hot.sigma_xx).epsilon(1e-9));

  CHECK_THROWS_AS(wigner_covariance(StationaryMoments{-0.6, 0.0}), Error);
}

TEST_CASE("contour polylines") {
  const WignerEllipse ground = wigner_covariance(thermal_moments(0.0));
  const auto four = contour_polyline(ground, 4);
  REQUIRE(four.size() == 4);
  CHECK(four[0].first == doctest::Approx(0.5));
  CHECK(std::abs(four[0].second) < 1e-15);
  CHECK(std::abs(four[1].first) < 1e-15);
  CHECK(four[1].second == doctest::Approx(0.5));
  CHECK(four[2].first == doctest::Approx(-0.5));
  CHECK(four[3].second == doctest::Approx(-0.5));
  CHECK_THROWS_AS(contour_polyline(ground, 3), Error);

  SystemParams p = SystemParams::fig1();
  p.nu = 3.0 * p.g;  // visibly tilted and squeezed
  const WignerEllipse e = wigner_covariance(stationary_moments(p));
  Eigen::Matrix2d cov;
  cov << e.sigma_xx, e.sigma_xp, e.sigma_xp, e.sigma_pp;
  const Eigen::Matrix2d inv = cov.inverse();
  const auto pts = contour_polyline(e, 256);
  for (const auto& [x, y] : pts) {
    const Eigen::Vector2d q(x, y);
    CHECK(std::abs(q.dot(inv * q) - 1.0) < 1e-10);
  }
  CHECK(shoelace(pts) == doctest::Approx(kPi * std::sqrt(cov.determinant())).epsilon(1e-3));
  CHECK(e.area() == doctest::Approx(kPi * std::sqrt(cov.determinant())).epsilon(1e-12));
}
