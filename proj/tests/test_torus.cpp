#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "trpca/rng.hpp"
#include "trpca/torus.hpp"

using namespace trpca;

TEST_CASE("cmod wraps onto [-pi, pi)") {
  CHECK(cmod(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0).epsilon(1e-14));
  CHECK(cmod(kPi) == doctest::Approx(-kPi));  // boundary identification
  CHECK(cmod(-0.5) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(cmod(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(cmod(INFINITY), std::domain_error);
}

TEST_CASE("cmod is 2pi-periodic") {
  CounterRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = rng.uniform(-kPi, kPi);
    const double base = cmod(x);
    for (int k = -10; k <= 10; ++k) {
      CHECK(circ_dist(cmod(x + kTwoPi * k), base) < 1e-10);
    }
  }
}

TEST_CASE("torus_dist basics") {
  CHECK(torus_dist({0, 0}, {0, 0}) == 0.0);
  CHECK(torus_dist({kPi - 0.1, 0}, {-kPi + 0.1, 0}) ==
        doctest::Approx(0.2).epsilon(1e-12));
  // (pi, pi) wraps to (-pi, -pi): antipodal from the origin in both
  // coordinates, the diameter of the metric.
  CHECK(torus_dist({0, 0}, {kPi, kPi}) ==
        doctest::Approx(kPi * std::sqrt(2.0)));
}

TEST_CASE("torus_dist triangle inequality") {
  CounterRng rng(12);
  for (int trial = 0; trial < 10000; ++trial) {
    const TorusPoint a(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    const TorusPoint b(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    const TorusPoint c(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    CHECK(torus_dist(a, c) <= torus_dist(a, b) + torus_dist(b, c) + 1e-12);
  }
}

TEST_CASE("circular_mean") {
  const std::vector<double> constant{0.3, 0.3};
  CHECK(circular_mean(constant).value() == doctest::Approx(0.3));

  const std::vector<double> about_cut{kPi - 0.1, -kPi + 0.1};
  CHECK(circular_mean(about_cut).value() == doctest::Approx(-kPi));

  const std::vector<double> quarter{0.0, kPi / 2.0};
  CHECK(circular_mean(quarter).value() == doctest::Approx(kPi / 4.0));

  CHECK_THROWS_AS(circular_mean(std::vector<double>{}), std::invalid_argument);
  const std::vector<double> antipodal{0.0, kPi};
  CHECK_THROWS_AS(circular_mean(antipodal), std::runtime_error);
}

TEST_CASE("frechet_summary singleton and symmetric pair") {
  const std::vector<TorusPoint> one{{0.7, -1.2}};
  const FrechetSummary f1 = frechet_summary(one);
  CHECK(f1.mean.theta1.value() == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(f1.mean.theta2.value() == doctest::Approx(-1.2).epsilon(1e-9));
  CHECK(f1.total_variance == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<TorusPoint> pair{{0.1, 0.0}, {-0.1, 0.0}};
  const FrechetSummary f2 = frechet_summary(pair);
  CHECK(std::fabs(f2.mean.theta1.value()) < 1e-9);
  CHECK(std::fabs(f2.mean.theta2.value()) < 1e-9);
  CHECK(f2.total_variance == doctest::Approx(0.02).epsilon(1e-9));

  CHECK_THROWS_AS(frechet_summary(std::vector<TorusPoint>{}),
                  std::invalid_argument);
}

TEST_CASE("frechet marginal decomposition") {
  CounterRng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TorusPoint> sample;
    for (int i = 0; i < 40; ++i) {
      sample.emplace_back(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    }
    const FrechetSummary f = frechet_summary(sample);
    CHECK(std::fabs(f.total_variance - f.marginal_variances[0] -
                    f.marginal_variances[1]) < 1e-10);
  }
}

TEST_CASE("frechet mean matches the exhaustive grid oracle") {
  // 50 exactly uniform grid points: all cell midpoints tie; both the
  // library and the oracle resolve the tie to the smallest angle.
  std::vector<TorusPoint> grid_sample;
  std::vector<double> grid_angles;
  for (int i = 0; i < 50; ++i) {
    const double t = -kPi + kTwoPi * i / 50.0;
    grid_sample.emplace_back(t, 0.0);
    grid_angles.push_back(t);
  }
  const FrechetSummary f = frechet_summary(grid_sample);
  const oracles::GridFrechet g = oracles::frechet_grid_oracle(grid_angles);
  CHECK(circ_dist(f.mean.theta1.value(), g.mean) <= kTwoPi / 2000.0);
  CHECK(f.marginal_variances[0] ==
        doctest::Approx(g.variance).epsilon(1e-6));
  CHECK(f.tie);

  // Random concentrated samples: unique minimizer, direct agreement.
  CounterRng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> angles;
    const double center = rng.uniform(-kPi, kPi);
    for (int i = 0; i < 25; ++i) {
      angles.push_back(cmod(center + 0.4 * rng.normal()));
    }
    const CircularFrechet cf = frechet_circular(angles);
    const oracles::GridFrechet go = oracles::frechet_grid_oracle(angles);
    CHECK(circ_dist(cf.mean, go.mean) <= kTwoPi / 2000.0);
    CHECK(cf.variance <= go.variance + 1e-9);
  }
}

TEST_CASE("frechet shift equivariance on concentrated samples") {
  CounterRng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TorusPoint> sample;
    const double c1 = rng.uniform(-kPi, kPi), c2 = rng.uniform(-kPi, kPi);
    for (int i = 0; i < 30; ++i) {
      sample.emplace_back(cmod(c1 + 0.3 * rng.normal()),
                          cmod(c2 + 0.3 * rng.normal()));
    }
    const FrechetSummary base = frechet_summary(sample);
    const double shift = rng.uniform(-kPi, kPi);
    std::vector<TorusPoint> shifted;
    for (const TorusPoint& p : sample) {
      shifted.emplace_back(cmod(p.theta1 + shift), cmod(p.theta2 + shift));
    }
    const FrechetSummary moved = frechet_summary(shifted);
    CHECK(circ_dist(moved.mean.theta1.value(),
                    cmod(base.mean.theta1.value() + shift)) < 1e-6);
    CHECK(circ_dist(moved.mean.theta2.value(),
                    cmod(base.mean.theta2.value() + shift)) < 1e-6);
    CHECK(moved.total_variance ==
          doctest::Approx(base.total_variance).epsilon(1e-8));
  }
}
