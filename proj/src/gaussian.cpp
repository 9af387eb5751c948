#include "trapcool/gaussian.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "trapcool/errors.hpp"

namespace trapcool {

namespace {

double feedback_strength(const SystemParams& p) {
  const double s = p.g * std::sin(p.phi);
  if (s == 0.0 || std::abs(std::sin(p.phi)) < 1e-12) {
    throw Error(ErrorKind::invalid_feedback_phase, "g sin(phi) = 0: bath parameters are singular");
  }
  return s;
}

}  // namespace

BathParams bath_params(const SystemParams& p) {
  const double s = feedback_strength(p);
  const double k = p.measurement_rate();
  if (!(k > 0.0)) throw Error(ErrorKind::config, "bath parameters require chi > 0 and kappa > 0");
  const double backaction = k / 4.0;                          // χ²/4κ
  const double feedback_noise = p.g * p.g / (4.0 * p.eta * k);  // g²/(4ηχ²/κ)

  BathParams b;
  b.gamma = -s;
  b.n = -(p.gamma_h + backaction + feedback_noise) / s - 0.5;
  b.m = cplx((backaction - feedback_noise) / s, -0.5 * std::cos(p.phi) / std::sin(p.phi));
  return b;
}

double effective_occupancy(const SystemParams& p) { return bath_params(p).n; }

bool stability(const SystemParams& p) { return p.g * std::sin(p.phi) < 0.0; }

StationaryMoments stationary_moments(const SystemParams& p) {
  if (!stability(p)) {
    throw Error(ErrorKind::unstable, "no stationary state unless g sin(phi) < 0");
  }
  return stationary_moments(p, bath_params(p));
}

StationaryMoments stationary_moments(const SystemParams& p, const BathParams& b) {
  if (!stability(p)) {
    throw Error(ErrorKind::unstable, "no stationary state unless g sin(phi) < 0");
  }
  if (!(p.nu > 0.0)) throw Error(ErrorKind::config, "stationary moments require nu > 0");
  const double s = p.g * std::sin(p.phi);
  const double nu = p.nu;
  const double four_nu2 = 4.0 * nu * nu;
  const double re_m = b.m.real();
  const double im_m = b.m.imag();

  StationaryMoments out;
  out.zeta = (b.n * (s * s + four_nu2) + s * (2.0 * nu * im_m - s * re_m) + 0.5 * s * s) / four_nu2;
  out.mu = cplx(b.gamma * ((b.n + 0.5) * s + b.gamma * re_m + 2.0 * nu * im_m) / four_nu2,
                s / (2.0 * nu) * (re_m - (b.n + 0.5)));
  return out;
}

OptimalGain optimal_gain(const SystemParams& p) {
  if (!(p.chi != 0.0 && p.kappa > 0.0 && p.eta > 0.0 && p.eta <= 1.0)) {
    throw Error(ErrorKind::config, "optimal gain requires chi != 0, kappa > 0, eta in (0,1]");
  }
  const double backaction = p.chi * p.chi / (4.0 * p.kappa);
  OptimalGain out;
  out.g_opt = 4.0 * std::sqrt((p.gamma_h + backaction) * p.eta * backaction);
  out.n_min =
      0.5 * (std::sqrt((1.0 + 4.0 * p.kappa * p.gamma_h / (p.chi * p.chi)) / p.eta) - 1.0);
  return out;
}

double WignerEllipse::area() const {
  return std::numbers::pi * semi_axes[0] * semi_axes[1];
}

WignerEllipse wigner_covariance(const StationaryMoments& m) {
  WignerEllipse e;
  e.sigma_xx = (1.0 + 2.0 * m.zeta + 2.0 * m.mu.real()) / 4.0;
  e.sigma_pp = (1.0 + 2.0 * m.zeta - 2.0 * m.mu.real()) / 4.0;
  e.sigma_xp = m.mu.imag() / 2.0;

  Eigen::Matrix2d cov;
  cov << e.sigma_xx, e.sigma_xp, e.sigma_xp, e.sigma_pp;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  const Eigen::Vector2d ev = es.eigenvalues();  // ascending
  if (!(ev(0) > 0.0)) {
    throw Error(ErrorKind::non_positive_covariance,
                "Wigner covariance has eigenvalue " + std::to_string(ev(0)));
  }
  e.semi_axes = {std::sqrt(ev(1)), std::sqrt(ev(0))};
  if (ev(1) - ev(0) > 1e-15 * ev(1)) {
    const Eigen::Vector2d major = es.eigenvectors().col(1);
    e.tilt = std::atan2(major(1), major(0));
  }
  return e;
}

std::vector<std::pair<double, double>> contour_polyline(const WignerEllipse& e, int n_points) {
  if (n_points < 4) throw Error(ErrorKind::config, "contour needs at least 4 points");
  const double c = std::cos(e.tilt);
  const double s = std::sin(e.tilt);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n_points;
    const double u = e.semi_axes[0] * std::cos(t);
    const double v = e.semi_axes[1] * std::sin(t);
    pts.emplace_back(c * u - s * v, s * u + c * v);
  }
  return pts;
}

}  // namespace trapcool
