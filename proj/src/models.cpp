#include "trpca/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trpca/bessel.hpp"

namespace trpca {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

BsvmParams::BsvmParams(double mu1_, double mu2_, double kappa1_,
                       double kappa2_, double lambda_)
    : mu1(mu1_), mu2(mu2_), kappa1(kappa1_), kappa2(kappa2_), lambda(lambda_) {
  require(std::isfinite(kappa1) && kappa1 >= 0.0, "BsvM: kappa1 must be >= 0");
  require(std::isfinite(kappa2) && kappa2 >= 0.0, "BsvM: kappa2 must be >= 0");
  require(std::isfinite(lambda), "BsvM: lambda must be finite");
  log_norm = bsvm_log_norm_series(kappa1, kappa2, lambda);
}

BwcParams::BwcParams(double mu1_, double mu2_, double xi1_, double xi2_,
                     double rho_)
    : mu1(mu1_), mu2(mu2_), xi1(xi1_), xi2(xi2_), rho(rho_) {
  require(std::isfinite(xi1) && xi1 >= 0.0 && xi1 < 1.0,
          "BWC: xi1 must lie in [0, 1)");
  require(std::isfinite(xi2) && xi2 >= 0.0 && xi2 < 1.0,
          "BWC: xi2 must lie in [0, 1)");
  require(std::isfinite(rho) && rho > -1.0 && rho < 1.0,
          "BWC: rho must lie in (-1, 1)");
  const double ar = std::fabs(rho);
  const double r2 = rho * rho;
  const double x1sq = xi1 * xi1, x2sq = xi2 * xi2;
  c = (1.0 - r2) * (1.0 - x1sq) * (1.0 - x2sq) / (4.0 * kPi * kPi);
  c0 = (1.0 + r2) * (1.0 + x1sq) * (1.0 + x2sq) - 8.0 * ar * xi1 * xi2;
  c1 = 2.0 * (1.0 + r2) * xi1 * (1.0 + x2sq) - 4.0 * ar * (1.0 + x1sq) * xi2;
  c2 = 2.0 * (1.0 + r2) * (1.0 + x1sq) * xi2 - 4.0 * ar * xi1 * (1.0 + x2sq);
  c3 = -4.0 * (1.0 + r2) * xi1 * xi2 + 2.0 * ar * (1.0 + x1sq) * (1.0 + x2sq);
  c4 = 2.0 * rho * (1.0 - x1sq) * (1.0 - x2sq);  // signed rho, unlike c0..c3
}

BwnParams::BwnParams(double mu1_, double mu2_, double sigma1_sq_,
                     double sigma2_sq_, double rho_)
    : mu(mu1_, mu2_), sigma1_sq(sigma1_sq_), sigma2_sq(sigma2_sq_),
      rho(rho_) {
  require(std::isfinite(sigma1_sq) && sigma1_sq > 0.0,
          "BWN: sigma1_sq must be > 0");
  require(std::isfinite(sigma2_sq) && sigma2_sq > 0.0,
          "BWN: sigma2_sq must be > 0");
  require(std::isfinite(rho) && rho > -1.0 && rho < 1.0,
          "BWN: rho must lie in (-1, 1)");
}

double bsvm_log_norm_series(double kappa1, double kappa2, double lambda) {
  require(kappa1 >= 0.0 && kappa2 >= 0.0, "BSvM: kappa must be >= 0");
  // log of 4 pi^2 sum_m C(2m, m) (lambda/2)^{2m} k1^{-m} I_m(k1) k2^{-m} I_m(k2),
  // evaluated with e^{-k} I_m scaling so the exponents stay in range:
  // S = e^{k1 + k2} * sum_m C(2m,m) (lambda/2)^{2m} g_m(k1) g_m(k2),
  // g_m(k) = e^{-k} k^{-m} I_m(k). Term ratios use the Bessel ratio ladder
  // (I_{m+1}/I_m)/k, which stays finite as k -> 0.
  constexpr int kMaxTerms = 200;
  const double q = 0.25 * lambda * lambda;

  const double term0 = bessel_i_scaled(0, kappa1) * bessel_i_scaled(0, kappa2);
  double sum = term0;
  if (q > 0.0) {
    bool converged = false;
    // Most parameter ranges converge within a few dozen terms; retry with
    // the full ladder only when the short one runs out.
    for (int budget : {40, kMaxTerms}) {
      const std::vector<double> rok1 = ratio_over_x_ladder(kappa1, budget);
      const std::vector<double> rok2 = ratio_over_x_ladder(kappa2, budget);
      double term = term0;
      sum = term0;
      for (int m = 0; m < budget; ++m) {
        const double binom_ratio =
            (2.0 * m + 1.0) * (2.0 * m + 2.0) / ((m + 1.0) * (m + 1.0));
        term *= binom_ratio * q * rok1[m] * rok2[m];
        sum += term;
        if (term < 1e-14 * sum) {
          converged = true;
          break;
        }
      }
      if (converged) break;
    }
    if (!converged) {
      throw std::runtime_error(
          "bsvm_norm_const: series did not converge within 200 terms");
    }
  }
  return kappa1 + kappa2 + std::log(4.0 * kPi * kPi * sum);
}

std::vector<double> ratio_over_x_ladder(double x, int count) {
  // rok_m = (I_{m+1}(x)/I_m(x)) / x; downward ladder rok_{k-1} = 1/(2k + x^2 rok_k),
  // well defined at x = 0 where rok_m = 1/(2(m+1)).
  std::vector<double> rok(count, 0.0);
  const int start = count + static_cast<int>(std::sqrt(40.0 * count) +
                                             std::max(0.0, x)) + 20;
  const double x2 = x * x;
  double rk = 0.0;
  for (int k = start; k >= 1; --k) {
    rk = 1.0 / (2.0 * k + x2 * rk);
    if (k - 1 < count) rok[k - 1] = rk;
  }
  return rok;
}

double bsvm_norm_const(double kappa1, double kappa2, double lambda) {
  return std::exp(-bsvm_log_norm_series(kappa1, kappa2, lambda));
}

DensityDerivatives bsvm_derivatives(const TorusPoint& p,
                                    const BsvmParams& params) {
  const double t1 = cmod(p.theta1 - params.mu1);
  const double t2 = cmod(p.theta2 - params.mu2);
  const double s1 = std::sin(t1), cth1 = std::cos(t1);
  const double s2 = std::sin(t2), cth2 = std::cos(t2);
  const double k1 = params.kappa1, k2 = params.kappa2, lam = params.lambda;

  DensityDerivatives d;
  // Components of grad f / f and Hess f / f; the common positive factor f
  // of the raw derivatives cancels in this normalization.
  d.d1 = -k1 * s1 + lam * s2 * cth1;
  d.d2 = -k2 * s2 + lam * s1 * cth2;
  d.u = d.d1 * d.d1 - k1 * cth1 - lam * s1 * s2;
  d.v = lam * cth1 * cth2 + d.d1 * d.d2;
  d.w = d.d2 * d.d2 - k2 * cth2 - lam * s1 * s2;

  const double kernel = k1 * cth1 + k2 * cth2 + lam * s1 * s2;
  d.f = std::exp(kernel - params.log_norm);
  return d;
}

DensityDerivatives bwc_derivatives(const TorusPoint& p,
                                   const BwcParams& params) {
  const double t1 = cmod(p.theta1 - params.mu1);
  const double t2 = cmod(p.theta2 - params.mu2);
  const double s1 = std::sin(t1), cth1 = std::cos(t1);
  const double s2 = std::sin(t2), cth2 = std::cos(t2);

  const double denom = params.c0 - params.c1 * cth1 - params.c2 * cth2 -
                       params.c3 * cth1 * cth2 - params.c4 * s1 * s2;
  const double fstar = 1.0 / denom;  // f* = f / c

  // Gradient/Hessian components of f* up to the common positive factor
  // f*^2; multiplying by f* yields grad f / f and Hess f / f.
  const double g1 = -params.c1 * s1 - params.c3 * s1 * cth2 +
                    params.c4 * s2 * cth1;
  const double g2 = -params.c2 * s2 - params.c3 * s2 * cth1 +
                    params.c4 * s1 * cth2;
  const double uu = 2.0 * g1 * g1 * fstar - params.c1 * cth1 -
                    params.c3 * cth1 * cth2 - params.c4 * s1 * s2;
  const double vv = 2.0 * g1 * g2 * fstar + params.c3 * s1 * s2 +
                    params.c4 * cth1 * cth2;
  const double ww = 2.0 * g2 * g2 * fstar - params.c2 * cth2 -
                    params.c3 * cth2 * cth1 - params.c4 * s1 * s2;

  DensityDerivatives d;
  d.f = params.c * fstar;
  d.d1 = fstar * g1;
  d.d2 = fstar * g2;
  d.u = fstar * uu;
  d.v = fstar * vv;
  d.w = fstar * ww;
  return d;
}

namespace {

double bwn_density(const TorusPoint& p, const BwnParams& params) {
  // Coordinatewise-wrapped planar normal; the wrapping sum converges fast
  // for the moderate variances this model is used with.
  const double s1 = std::sqrt(params.sigma1_sq);
  const double s2 = std::sqrt(params.sigma2_sq);
  const double det = params.sigma1_sq * params.sigma2_sq *
                     (1.0 - params.rho * params.rho);
  const double norm = 1.0 / (kTwoPi * std::sqrt(det));
  const double x = cmod(p.theta1 - params.mu.theta1);
  const double y = cmod(p.theta2 - params.mu.theta2);
  double acc = 0.0;
  for (int k1 = -4; k1 <= 4; ++k1) {
    for (int k2 = -4; k2 <= 4; ++k2) {
      const double z1 = (x + kTwoPi * k1) / s1;
      const double z2 = (y + kTwoPi * k2) / s2;
      const double quad = (z1 * z1 - 2.0 * params.rho * z1 * z2 + z2 * z2) /
                          (1.0 - params.rho * params.rho);
      acc += std::exp(-0.5 * quad);
    }
  }
  return norm * acc;
}

}  // namespace

double density(const TorusPoint& p, const ModelParams& params) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BsvmParams>) {
          return bsvm_derivatives(p, m).f;
        } else if constexpr (std::is_same_v<T, BwcParams>) {
          return bwc_derivatives(p, m).f;
        } else {
          return bwn_density(p, m);
        }
      },
      params);
}

double log_density(const TorusPoint& p, const ModelParams& params) {
  return std::log(density(p, params));
}

namespace {

template <typename Density>
std::vector<TorusPoint> rejection_sample(const Density& dens, std::size_t n,
                                         CounterRng& rng) {
  // Envelope constant: 1.1 x max density over a 256 x 256 grid.
  constexpr int kGrid = 256;
  double fmax = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double t1 = -kPi + kTwoPi * i / kGrid;
    for (int j = 0; j < kGrid; ++j) {
      const double t2 = -kPi + kTwoPi * j / kGrid;
      fmax = std::max(fmax, dens(TorusPoint(t1, t2)));
    }
  }
  const double envelope = 1.1 * fmax;

  std::vector<TorusPoint> out;
  out.reserve(n);
  std::size_t proposals = 0, accepted = 0;
  while (out.size() < n) {
    const TorusPoint cand(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    ++proposals;
    if (rng.uniform() * envelope < dens(cand)) {
      out.push_back(cand);
      ++accepted;
    }
    if (proposals == 100000 && accepted < 10) {
      throw std::runtime_error(
          "sample: rejection acceptance rate < 1e-4; concentration too high, "
          "rescale the parameters");
    }
  }
  return out;
}

}  // namespace

std::vector<TorusPoint> sample(const ModelParams& params, std::size_t n,
                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  CounterRng rng(seed);
  return std::visit(
      [&](const auto& m) -> std::vector<TorusPoint> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BsvmParams>) {
          return rejection_sample(
              [&](const TorusPoint& p) { return bsvm_derivatives(p, m).f; },
              n, rng);
        } else if constexpr (std::is_same_v<T, BwcParams>) {
          return rejection_sample(
              [&](const TorusPoint& p) { return bwc_derivatives(p, m).f; },
              n, rng);
        } else {
          // Correlated normal deviates through the Cholesky factor, then
          // wrapped coordinatewise.
          const double s1 = std::sqrt(m.sigma1_sq);
          const double s2 = std::sqrt(m.sigma2_sq);
          const double a21 = m.rho * s2;
          const double a22 = s2 * std::sqrt(1.0 - m.rho * m.rho);
          std::vector<TorusPoint> out;
          out.reserve(n);
          for (std::size_t i = 0; i < n; ++i) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            out.emplace_back(cmod(m.mu.theta1 + s1 * z1),
                             cmod(m.mu.theta2 + a21 * z1 + a22 * z2));
          }
          return out;
        }
      },
      params);
}

TorusPoint location(const ModelParams& params) {
  return std::visit(
      [](const auto& m) -> TorusPoint {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BwnParams>) {
          return m.mu;
        } else {
          return TorusPoint(m.mu1, m.mu2);
        }
      },
      params);
}

}  // namespace trpca
