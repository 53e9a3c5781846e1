#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "trpca/bessel.hpp"
#include "trpca/models.hpp"
#include "trpca/rng.hpp"

using namespace trpca;

TEST_CASE("scaled Bessel I against reference values") {
  // mpmath, 30 digits
  CHECK(bessel_i_scaled(0, 1.0) * std::exp(1.0) ==
        doctest::Approx(1.26606587775200834).epsilon(1e-13));
  CHECK(bessel_i_scaled(1, 1.0) * std::exp(1.0) ==
        doctest::Approx(0.56515910399248503).epsilon(1e-13));
  CHECK(bessel_i_scaled(0, 0.3) * std::exp(0.3) ==
        doctest::Approx(1.02262687935159699).epsilon(1e-13));
  CHECK(bessel_i_scaled(5, 2.7) * std::exp(2.7) ==
        doctest::Approx(0.05031280389153374).epsilon(1e-13));
  CHECK(bessel_i_scaled(0, 15.0) ==
        doctest::Approx(0.10389953144882272).epsilon(1e-12));
  CHECK(bessel_i_scaled(3, 80.0) ==
        doctest::Approx(0.04221502696905632).epsilon(1e-12));
  CHECK(bessel_i_scaled(0, 0.0) == 1.0);
  CHECK(bessel_i_scaled(4, 0.0) == 0.0);
}

TEST_CASE("scaled Bessel vector satisfies the e^x normalization identity") {
  for (double x : {0.7, 3.0, 15.0, 80.0, 240.0}) {
    // orders out to ~1.6x carry the mass of e^x = I_0 + 2 sum I_k
    std::vector<double> v(static_cast<std::size_t>(1.6 * x) + 80);
    bessel_i_scaled_all(x, v);
    double sum = v[0];
    for (std::size_t k = 1; k < v.size(); ++k) sum += 2.0 * v[k];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Bessel ratios and A inversion") {
  CHECK(bessel_i_ratios(2.3, 3)[2] ==
        doctest::Approx(0.34733660554261409).epsilon(1e-13));
  CHECK(bessel_a(2.0) == doctest::Approx(0.69777465796400798).epsilon(1e-13));
  for (double kappa : {0.05, 0.5, 2.0, 20.0, 180.0}) {
    CHECK(bessel_a_inv(bessel_a(kappa)) ==
          doctest::Approx(kappa).epsilon(1e-6));
  }
  // ratio_over_x_ladder matches I_{m+1}/I_m / x and survives x = 0
  const auto rok = ratio_over_x_ladder(2.3, 4);
  CHECK(rok[2] == doctest::Approx(0.34733660554261409 / 2.3).epsilon(1e-12));
  const auto rok0 = ratio_over_x_ladder(0.0, 3);
  CHECK(rok0[0] == doctest::Approx(0.5));
  CHECK(rok0[1] == doctest::Approx(0.25));
}

TEST_CASE("BSvM normalizing constant") {
  CHECK(bsvm_norm_const(0, 0, 0) ==
        doctest::Approx(1.0 / (4.0 * kPi * kPi)).epsilon(1e-14));
  // lambda = 0 kills every m >= 1 term
  CHECK(bsvm_norm_const(1, 1, 0) ==
        doctest::Approx(0.01580256753662818).epsilon(1e-13));
  // reference: 2-D quadrature of the exponential kernel (mpmath cross-check
  // 0.021471963555617002)
  const double quad = oracles::integrate_torus(
      [](double t1, double t2) {
        return std::exp(0.3 * std::cos(t1) + 0.3 * std::cos(t2) +
                        1.0 * std::sin(t1) * std::sin(t2));
      },
      2048);
  CHECK(bsvm_norm_const(0.3, 0.3, 1.0) ==
        doctest::Approx(1.0 / quad).epsilon(1e-8));
  CHECK(bsvm_norm_const(0.3, 0.3, 1.0) ==
        doctest::Approx(0.021471963555617002).epsilon(1e-12));
}

TEST_CASE("bsvm_derivatives closed forms") {
  const BsvmParams p(0, 0, 1, 1, 0);
  const DensityDerivatives at_mode = bsvm_derivatives({0, 0}, p);
  CHECK(at_mode.d1 == 0.0);
  CHECK(at_mode.d2 == 0.0);
  const DensityDerivatives at_side = bsvm_derivatives({kPi / 2, 0}, p);
  CHECK(at_side.d1 == doctest::Approx(-1.0));
  CHECK(at_side.d2 == doctest::Approx(0.0));
  // density value at the mode of BSvM(0,0,1,1,0): e^2 / (4 pi^2 I0(1)^2)
  CHECK(at_mode.f ==
        doctest::Approx(std::exp(2.0) * 0.01580256753662818).epsilon(1e-12));
}

namespace {

// Checks d = grad log f and (u, v, w) = Hess f / f against central finite
// differences of log f: u = l11 + l1^2 and so on.
template <typename Params, typename Deriv>
void check_derivatives_fd(const Params& params, const Deriv& deriv,
                          std::uint64_t seed, int trials) {
  CounterRng rng(seed);
  auto logf = [&](double t1, double t2) {
    return std::log(deriv(TorusPoint(t1, t2), params).f);
  };
  for (int trial = 0; trial < trials; ++trial) {
    const double t1 = rng.uniform(-kPi, kPi), t2 = rng.uniform(-kPi, kPi);
    const DensityDerivatives d = deriv(TorusPoint(t1, t2), params);
    const oracles::Fd2 fd = oracles::finite_diff2(logf, t1, t2, 1e-5);
    const double u_fd = fd.l11 + fd.l1 * fd.l1;
    const double v_fd = fd.l12 + fd.l1 * fd.l2;
    const double w_fd = fd.l22 + fd.l2 * fd.l2;
    CHECK(d.d1 == doctest::Approx(fd.l1).epsilon(1e-5).scale(1.0));
    CHECK(d.d2 == doctest::Approx(fd.l2).epsilon(1e-5).scale(1.0));
    CHECK(d.u == doctest::Approx(u_fd).epsilon(1e-4).scale(1.0));
    CHECK(d.v == doctest::Approx(v_fd).epsilon(1e-4).scale(1.0));
    CHECK(d.w == doctest::Approx(w_fd).epsilon(1e-4).scale(1.0));
  }
}

}  // namespace

TEST_CASE("bsvm_derivatives match finite differences") {
  check_derivatives_fd(BsvmParams(0, 0, 0.3, 0.6, 0.5),
                       [](const TorusPoint& p, const BsvmParams& m) {
                         return bsvm_derivatives(p, m);
                       },
                       21, 40);
}

TEST_CASE("bwc_derivatives closed forms and finite differences") {
  const BwcParams uniform(0, 0, 0, 0, 0);
  for (double t1 : {-2.0, 0.0, 1.3}) {
    const DensityDerivatives d = bwc_derivatives({t1, 0.4}, uniform);
    CHECK(d.f == doctest::Approx(1.0 / (4.0 * kPi * kPi)));
    CHECK(d.d1 == 0.0);
    CHECK(d.d2 == 0.0);
    CHECK(d.u == 0.0);
    CHECK(d.v == 0.0);
    CHECK(d.w == 0.0);
  }

  const BwcParams p(0.4, -0.9, 0.3, 0.3, 0.6);
  const DensityDerivatives at_mode = bwc_derivatives({0.4, -0.9}, p);
  CHECK(std::fabs(at_mode.d1) < 1e-14);
  CHECK(std::fabs(at_mode.d2) < 1e-14);

  check_derivatives_fd(BwcParams(0, 0, 0.3, 0.3, 0.6),
                       [](const TorusPoint& pt, const BwcParams& m) {
                         return bwc_derivatives(pt, m);
                       },
                       22, 40);
}

TEST_CASE("densities integrate to one and are pointwise symmetric") {
  const ModelParams bsvm = BsvmParams(0.4, -1.0, 0.3, 0.6, 0.5);
  const ModelParams bwc = BwcParams(-2.0, 0.7, 0.3, 0.3, 0.6);
  for (const ModelParams* m : {&bsvm, &bwc}) {
    const double total = oracles::integrate_torus(
        [&](double t1, double t2) {
          return density(TorusPoint(t1, t2), *m);
        },
        512);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

    const TorusPoint mu = location(*m);
    CounterRng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
      const double d1 = rng.uniform(-kPi, kPi), d2 = rng.uniform(-kPi, kPi);
      const TorusPoint plus(cmod(mu.theta1 + d1), cmod(mu.theta2 + d2));
      const TorusPoint minus(cmod(mu.theta1 - d1), cmod(mu.theta2 - d2));
      CHECK(density(plus, *m) ==
            doctest::Approx(density(minus, *m)).epsilon(1e-11));
    }
  }
}

TEST_CASE("BWC theta2 marginal is uniform when xi2 = rho = 0") {
  const ModelParams m = BwcParams(0, 0, 0.5, 0.0, 0.0);
  for (double t2 : {-2.5, -0.3, 0.9, 3.0}) {
    double marginal = 0.0;
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
      marginal +=
          density(TorusPoint(-kPi + kTwoPi * i / n, t2), m) * kTwoPi / n;
    }
    CHECK(marginal == doctest::Approx(1.0 / kTwoPi).epsilon(1e-9));
  }
}

TEST_CASE("sampling: degenerate BWN concentrates at mu") {
  const ModelParams m = BwnParams(1.0, -2.0, 1e-6, 1e-6, 0.0);
  const auto pts = sample(m, 1000, 99);
  for (const TorusPoint& p : pts) {
    CHECK(torus_dist(p, TorusPoint(1.0, -2.0)) < 0.01);
  }
}

TEST_CASE("sampling: BSvM sample mean near the symmetry center") {
  const ModelParams m = BsvmParams(0, 0, 2, 1, 0.5);
  const auto pts = sample(m, 100000, 7);
  const auto t1 = coord(pts, 1);
  const auto t2 = coord(pts, 2);
  CHECK(std::fabs(circular_mean(t1).value()) < 0.02);
  CHECK(std::fabs(circular_mean(t2).value()) < 0.02);
}

TEST_CASE("sampling: uniform BWC marginals pass a KS check at 1%") {
  const ModelParams m = BwcParams(0, 0, 0, 0, 0);
  const std::size_t n = 100000;
  const auto pts = sample(m, n, 42);
  for (int which : {1, 2}) {
    auto vals = coord(pts, which);
    std::sort(vals.begin(), vals.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double cdf = (vals[i] + kPi) / kTwoPi;
      ks = std::max(ks, std::fabs(cdf - (i + 1.0) / n));
      ks = std::max(ks, std::fabs(cdf - static_cast<double>(i) / n));
    }
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("sampling is deterministic per seed and errors on extreme "
          "concentration") {
  const ModelParams m = BsvmParams(0, 0, 2, 1, 0.5);
  const auto a = sample(m, 500, 123);
  const auto b = sample(m, 500, 123);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].theta1.value() == b[i].theta1.value());
    CHECK(a[i].theta2.value() == b[i].theta2.value());
  }
  const ModelParams sharp = BsvmParams(0, 0, 3000, 3000, 0);
  CHECK_THROWS_AS(sample(sharp, 10, 1), std::runtime_error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(BsvmParams(0, 0, -1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(BwcParams(0, 0, 1.0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BwcParams(0, 0, 0.5, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(BwnParams(0, 0, 0.0, 1, 0), std::invalid_argument);
  CHECK(BsvmParams(0, 0, 2, 2, 1).unimodal());
  CHECK_FALSE(BsvmParams(0, 0, 1, 1, 2).unimodal());
}
