#include "trpca/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "trpca/bessel.hpp"
#include "trpca/rng.hpp"

namespace trpca {

namespace {

constexpr double kXiMax = 0.9995;
constexpr double kKappaCap = 500.0;

// Per-observation trig, precomputed once per fit so each likelihood
// evaluation is a handful of multiply-adds per point.
struct TrigCache {
  std::vector<double> c1, s1, c2, s2;

  explicit TrigCache(std::span<const TorusPoint> sample) {
    c1.reserve(sample.size());
    s1.reserve(sample.size());
    c2.reserve(sample.size());
    s2.reserve(sample.size());
    for (const TorusPoint& p : sample) {
      c1.push_back(std::cos(p.theta1));
      s1.push_back(std::sin(p.theta1));
      c2.push_back(std::cos(p.theta2));
      s2.push_back(std::sin(p.theta2));
    }
  }
};

double bsvm_loglik_fast(const TrigCache& tc, double mu1, double mu2,
                        double k1, double k2, double lam) {
  const double cm1 = std::cos(mu1), sm1 = std::sin(mu1);
  const double cm2 = std::cos(mu2), sm2 = std::sin(mu2);
  double acc = 0.0;
  const std::size_t n = tc.c1.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double cd1 = tc.c1[i] * cm1 + tc.s1[i] * sm1;
    const double sd1 = tc.s1[i] * cm1 - tc.c1[i] * sm1;
    const double cd2 = tc.c2[i] * cm2 + tc.s2[i] * sm2;
    const double sd2 = tc.s2[i] * cm2 - tc.c2[i] * sm2;
    acc += k1 * cd1 + k2 * cd2 + lam * sd1 * sd2;
  }
  return acc - static_cast<double>(n) * bsvm_log_norm_series(k1, k2, lam);
}

double bwc_loglik_fast(const TrigCache& tc, const BwcParams& p) {
  const double cm1 = std::cos(p.mu1), sm1 = std::sin(p.mu1);
  const double cm2 = std::cos(p.mu2), sm2 = std::sin(p.mu2);
  double acc = 0.0;
  const std::size_t n = tc.c1.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double cd1 = tc.c1[i] * cm1 + tc.s1[i] * sm1;
    const double sd1 = tc.s1[i] * cm1 - tc.c1[i] * sm1;
    const double cd2 = tc.c2[i] * cm2 + tc.s2[i] * sm2;
    const double sd2 = tc.s2[i] * cm2 - tc.c2[i] * sm2;
    const double denom = p.c0 - p.c1 * cd1 - p.c2 * cd2 -
                         p.c3 * cd1 * cd2 - p.c4 * sd1 * sd2;
    acc += std::log(denom);
  }
  return static_cast<double>(n) * std::log(p.c) - acc;
}

struct NmResult {
  std::vector<double> x;
  double fmin = 0.0;
  bool converged = false;
};

// Standard Nelder-Mead; stops when the simplex max-coordinate diameter
// drops below diam_tol.
NmResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                     std::vector<double> x0, double step, int max_iter,
                     double diam_tol) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> pts(d + 1, x0);
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(pts[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(d + 1);
    for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> np(d + 1);
    std::vector<double> nf(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
      np[i] = pts[idx[i]];
      nf[i] = fv[idx[i]];
    }
    pts = std::move(np);
    fv = std::move(nf);
  };

  NmResult out;
  for (int it = 0; it < max_iter; ++it) {
    order();
    double diam = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        diam = std::max(diam, std::fabs(pts[i][j] - pts[0][j]));
      }
    }
    if (diam < diam_tol) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    auto blend = [&](double coef) {
      std::vector<double> p(d);
      for (std::size_t j = 0; j < d; ++j) {
        p[j] = centroid[j] + coef * (pts[d][j] - centroid[j]);
      }
      return p;
    };

    std::vector<double> refl = blend(-1.0);
    const double f_refl = f(refl);
    if (f_refl < fv[0]) {
      std::vector<double> exp_pt = blend(-2.0);
      const double f_exp = f(exp_pt);
      if (f_exp < f_refl) {
        pts[d] = std::move(exp_pt);
        fv[d] = f_exp;
      } else {
        pts[d] = std::move(refl);
        fv[d] = f_refl;
      }
    } else if (f_refl < fv[d - 1]) {
      pts[d] = std::move(refl);
      fv[d] = f_refl;
    } else {
      std::vector<double> con = blend(f_refl < fv[d] ? -0.5 : 0.5);
      const double f_con = f(con);
      if (f_con < std::min(f_refl, fv[d])) {
        pts[d] = std::move(con);
        fv[d] = f_con;
      } else {  // shrink toward the best vertex
        for (std::size_t i = 1; i <= d; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          }
          fv[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  out.x = pts[0];
  out.fmin = fv[0];
  return out;
}

// Transform bookkeeping: free coordinates <-> model parameters.
struct Coords {
  ModelFamily family;
  RestrictionSet res;

  std::size_t dim() const {
    return 2 + (res.homogeneous ? 1 : 2) + (res.independent ? 0 : 1);
  }

  ModelParams to_params(std::span<const double> x) const {
    const double mu1 = cmod(x[0]);
    const double mu2 = cmod(x[1]);
    std::size_t at = 2;
    double conc1, conc2;
    if (family == ModelFamily::bsvm) {
      conc1 = std::exp(std::clamp(x[at++], -30.0, std::log(kKappaCap)));
      conc2 = res.homogeneous
                  ? conc1
                  : std::exp(std::clamp(x[at++], -30.0, std::log(kKappaCap)));
      const double lam = res.independent ? 0.0 : x[at++];
      return BsvmParams(mu1, mu2, conc1, conc2, lam);
    }
    auto sigmoid = [](double t) {
      return 1.0 / (1.0 + std::exp(-std::clamp(t, -40.0, 40.0)));
    };
    conc1 = kXiMax * sigmoid(x[at++]);
    conc2 = res.homogeneous ? conc1 : kXiMax * sigmoid(x[at++]);
    const double rho =
        res.independent ? 0.0 : std::tanh(std::clamp(x[at++], -8.0, 8.0));
    return BwcParams(mu1, mu2, conc1, conc2, rho);
  }

  std::vector<double> from_start(const ModelParams& start) const {
    std::vector<double> x;
    x.reserve(dim());
    if (family == ModelFamily::bsvm) {
      const auto& p = std::get<BsvmParams>(start);
      x.push_back(p.mu1);
      x.push_back(p.mu2);
      const double k1 = std::max(p.kappa1, 1e-3);
      const double k2 = std::max(p.kappa2, 1e-3);
      if (res.homogeneous) {
        x.push_back(std::log(std::sqrt(k1 * k2)));
      } else {
        x.push_back(std::log(k1));
        x.push_back(std::log(k2));
      }
      if (!res.independent) x.push_back(p.lambda);
    } else {
      const auto& p = std::get<BwcParams>(start);
      x.push_back(p.mu1);
      x.push_back(p.mu2);
      auto logit = [](double u) {
        const double q = std::clamp(u / kXiMax, 1e-4, 1.0 - 1e-4);
        return std::log(q / (1.0 - q));
      };
      if (res.homogeneous) {
        x.push_back(logit(0.5 * (p.xi1 + p.xi2)));
      } else {
        x.push_back(logit(p.xi1));
        x.push_back(logit(p.xi2));
      }
      if (!res.independent) {
        x.push_back(std::atanh(std::clamp(p.rho, -0.999, 0.999)));
      }
    }
    return x;
  }
};

}  // namespace

double loglik(std::span<const TorusPoint> sample, const ModelParams& params) {
  double acc = 0.0;
  for (const TorusPoint& p : sample) acc += log_density(p, params);
  return acc;
}

ModelParams moment_start(std::span<const TorusPoint> sample,
                         ModelFamily family) {
  if (sample.size() < 10) {
    throw std::invalid_argument("moment_start: need at least 10 points");
  }
  const std::vector<double> t1 = coord(sample, 1);
  const std::vector<double> t2 = coord(sample, 2);
  const double mu1 = circular_mean(t1);
  const double mu2 = circular_mean(t2);
  const double r1 = mean_resultant_length(t1);
  const double r2 = mean_resultant_length(t2);

  if (family == ModelFamily::bsvm) {
    const double k1 = r1 >= 0.999 ? kKappaCap : bessel_a_inv(r1, kKappaCap);
    const double k2 = r2 >= 0.999 ? kKappaCap : bessel_a_inv(r2, kKappaCap);
    return BsvmParams(mu1, mu2, k1, k2, 0.0);
  }

  // Circular correlation (Jammalamadaka-SenGupta) feeds the rho start.
  double num = 0.0, den1 = 0.0, den2 = 0.0;
  for (const TorusPoint& p : sample) {
    const double a = std::sin(cmod(p.theta1 - mu1));
    const double b = std::sin(cmod(p.theta2 - mu2));
    num += a * b;
    den1 += a * a;
    den2 += b * b;
  }
  double corr = 0.0;
  if (den1 > 0.0 && den2 > 0.0) corr = num / std::sqrt(den1 * den2);
  const double rho = (corr < 0.0 ? -1.0 : 1.0) *
                     std::min(0.5, std::fabs(corr));
  return BwcParams(mu1, mu2, std::min(r1, 0.995), std::min(r2, 0.995), rho);
}

FitResult fit_mle(std::span<const TorusPoint> sample, ModelFamily family,
                  RestrictionSet restrictions) {
  if (sample.size() < 10) {
    throw std::invalid_argument("fit_mle: need at least 10 points");
  }
  const TrigCache tc(sample);
  const Coords coords{family, restrictions};

  auto negloglik = [&](std::span<const double> x) -> double {
    const ModelParams p = coords.to_params(x);
    if (family == ModelFamily::bsvm) {
      const auto& b = std::get<BsvmParams>(p);
      return -bsvm_loglik_fast(tc, b.mu1, b.mu2, b.kappa1, b.kappa2,
                               b.lambda);
    }
    return -bwc_loglik_fast(tc, std::get<BwcParams>(p));
  };

  const std::vector<double> x0 =
      coords.from_start(moment_start(sample, family));

  // Fixed-seed perturbations keep the three runs deterministic in the data.
  CounterRng rng(0x7281f17u);
  NmResult best;
  best.fmin = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (int run = 0; run < 3; ++run) {
    std::vector<double> start = x0;
    if (run > 0) {
      for (double& xi : start) xi += 0.1 * rng.normal();
    }
    NmResult nm = nelder_mead(negloglik, std::move(start), 0.25, 2000, 1e-8);
    any_converged = any_converged || nm.converged;
    if (nm.fmin < best.fmin) best = std::move(nm);
  }

  FitResult out;
  out.params = coords.to_params(best.x);
  out.family = family;
  out.loglik = -best.fmin;
  out.n = sample.size();
  out.restrictions = restrictions;
  out.converged = any_converged;
  const double k = 5.0 - restrictions.count();
  out.bic = k * std::log(static_cast<double>(sample.size())) - 2.0 * out.loglik;
  if (!any_converged) {
    throw convergence_error("fit_mle: no simplex run converged", out);
  }
  return out;
}

LrtResult lrt(const FitResult& unrestricted, const FitResult& restricted,
              double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("lrt: alpha must lie in (0, 0.5)");
  }
  if (!restricted.restrictions.contains(unrestricted.restrictions) ||
      restricted.restrictions.count() != unrestricted.restrictions.count() + 1) {
    throw std::invalid_argument(
        "lrt: restricted fit must add exactly one restriction");
  }
  const double diff = unrestricted.loglik - restricted.loglik;
  if (diff < -1e-6) {
    throw std::runtime_error(
        "lrt: restricted fit beats unrestricted; optimizer inconsistency");
  }
  LrtResult out;
  out.alpha = alpha;
  out.statistic = std::max(0.0, 2.0 * diff);
  out.critical = chi2_quantile_1(alpha);
  out.rejected = out.statistic > out.critical;
  return out;
}

namespace {

// Acklam's rational approximation to the standard normal quantile
// (|relative error| < 1.2e-9).
double norm_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double chi2_quantile_1(double alpha) {
  // chi^2_1 = Z^2, so the upper-alpha quantile is z_{alpha/2}^2.
  const double z = norm_quantile(1.0 - 0.5 * alpha);
  return z * z;
}

}  // namespace trpca
