#include <doctest.h>

#include <cmath>

#include "trapcool/ensemble.hpp"
#include "trapcool/errors.hpp"
#include "trapcool/validation.hpp"

using namespace trapcool;

namespace {

IntegratorConfig short_run() {
  IntegratorConfig cfg;
  cfg.dt = 0.0025;
  cfg.t_final = 0.5;
  cfg.scheme = Scheme::kraus_euler;
  cfg.record_every = 20;
  cfg.seed = 9;
  return cfg;
}

SystemParams cool_start() {
  SystemParams p = rescaled_params();
  p.n0 = 0.5;
  return p;
}

}  // namespace

TEST_CASE("identical trajectories give the same mean and zero spread") {
  const SystemParams p = cool_start();
  const FockBasisSpec spec{20, 1e-8};
  const TrajectoryRecord r = run_trajectory(p, spec, short_run(), true);
  const EnsembleSummary s = ensemble_mean({r, r, r});
  CHECK(s.count == 3);
  for (std::size_t j = 0; j < r.times.size(); ++j) {
    CHECK(s.n_mean[j] == doctest::Approx(r.n_cond[j]).epsilon(1e-14));
    CHECK(s.x_mean[j] == doctest::Approx(r.x_cond[j]).epsilon(1e-14));
    CHECK(s.n_se[j] == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("antithetic pairs cancel the odd moments without feedback") {
  // Starting from a thermal state ⟨X⟩ is odd in the noise, so mirrored pairs
  // average to zero.
  const SystemParams p = cool_start();
  const FockBasisSpec spec{20, 1e-8};
  EnsembleOptions eo;
  eo.n_traj = 4;
  eo.antithetic_pairs = true;
  const EnsembleSummary s = ensemble_mean(run_ensemble(p, spec, short_run(), false, eo));
  for (double x : s.x_mean) CHECK(std::abs(x) < 1e-12);
  for (double c : s.current_mean) CHECK(std::abs(c) < 1e-10);
}

TEST_CASE("parallel ensemble equals the serial reference") {
  const SystemParams p = cool_start();
  const FockBasisSpec spec{20, 1e-8};
  EnsembleOptions eo;
  eo.n_traj = 6;
  eo.first_stream = 3;
  eo.jobs = 3;
  const auto serial = run_ensemble_serial(p, spec, short_run(), true, eo);
  const auto parallel = run_ensemble(p, spec, short_run(), true, eo);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].stream == 3 + i);
    CHECK(serial[i].n_cond == parallel[i].n_cond);
    CHECK(serial[i].current == parallel[i].current);
  }
}

TEST_CASE("ensemble_mean rejects bad input") {
  const SystemParams p = cool_start();
  const FockBasisSpec spec{20, 1e-8};
  const TrajectoryRecord a = run_trajectory(p, spec, short_run(), true);
  IntegratorConfig other = short_run();
  other.record_every = 10;
  const TrajectoryRecord b = run_trajectory(p, spec, other, true);
  try {
    ensemble_mean({a, b});
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::grid_mismatch);
  }
  CHECK_THROWS_AS(ensemble_mean({a}), Error);
  CHECK_THROWS_AS(ensemble_mean({}), Error);
}

TEST_CASE("a failing trajectory is reported with its index") {
  SystemParams p = rescaled_params();
  p.n0 = 3.0;
  // Heats quickly into a small space.
  p.gamma_h = 5.0;
  const FockBasisSpec spec{80, 1e-8};
  IntegratorConfig cfg = short_run();
  cfg.t_final = 5.0;
  EnsembleOptions eo;
  eo.n_traj = 3;
  try {
    run_ensemble(p, spec, cfg, true, eo);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("trajectory 0") != std::string::npos);
  }
}
