#include "trpca/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace trpca {

namespace {

// Start order giving full double precision in the downward (Miller)
// recurrence for orders up to `top` at argument x.
int miller_start(int top, double x) {
  const int base = std::max(top, static_cast<int>(x));
  return base + static_cast<int>(std::sqrt(40.0 * (base + 1))) + 20;
}

double scaled_series(int m, double x) {
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  // e^{-x} (x/2)^m / m! * sum_t (x^2/4)^t / (t! (m+t)! / m!)
  const double log_pref = m * std::log(0.5 * x) - std::lgamma(m + 1.0) - x;
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int t = 0; t < 600; ++t) {
    term *= q / ((t + 1.0) * (m + t + 1.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(log_pref) * sum;
}

}  // namespace

void bessel_i_scaled_all(double x, std::span<double> out) {
  if (out.empty()) return;
  if (x < 0.0 || !std::isfinite(x)) {
    throw std::domain_error("bessel_i_scaled_all: x must be finite and >= 0");
  }
  const int n = static_cast<int>(out.size());
  if (x < 0.5) {
    // Downward recurrence degrades for tiny arguments; the series is cheap.
    for (int k = 0; k < n; ++k) out[k] = scaled_series(k, x);
    return;
  }

  for (int k = 0; k < n; ++k) out[k] = 0.0;
  double bip = 0.0, bi = 1.0;  // unnormalized I_{k+1}, I_k at order k = start
  const int start = miller_start(n - 1, x);
  double norm = 2.0 * bi;
  const double two_over_x = 2.0 / x;
  for (int k = start; k >= 1; --k) {
    const double bim = bip + k * two_over_x * bi;  // I_{k-1}
    bip = bi;
    bi = bim;
    if (std::fabs(bi) > 1e250) {  // rescale everything carried so far
      bi *= 1e-250;
      bip *= 1e-250;
      norm *= 1e-250;
      for (int j = 0; j < n; ++j) out[j] *= 1e-250;
    }
    if (k >= 2) norm += 2.0 * bi;  // accumulates 2*I_j for j = start-1 .. 1
    if (k <= n - 1) out[k] = bip;
  }
  norm += bi;  // e^x = I_0 + 2 sum_{k>=1} I_k; bi now holds I_0
  out[0] = bi;
  for (int k = 0; k < n; ++k) out[k] /= norm;
}

double bessel_i_scaled(int m, double x) {
  if (m < 0) throw std::domain_error("bessel_i_scaled: order must be >= 0");
  if (x < 0.0 || !std::isfinite(x)) {
    throw std::domain_error("bessel_i_scaled: x must be finite and >= 0");
  }
  if (x < 15.0) return scaled_series(m, x);
  std::vector<double> buf(m + 1);
  bessel_i_scaled_all(x, buf);
  return buf[m];
}

std::vector<double> bessel_i_ratios(double x, int count) {
  std::vector<double> r(std::max(count, 0), 0.0);
  if (count <= 0) return r;
  if (x == 0.0) return r;
  // R_{k-1} = 1 / (2k/x + R_k), seeded with R = 0 high above `count`.
  double rk = 0.0;
  for (int k = miller_start(count, x); k >= 1; --k) {
    rk = 1.0 / (2.0 * k / x + rk);
    if (k - 1 < count) r[k - 1] = rk;
  }
  return r;
}

double bessel_a(double kappa) {
  if (kappa < 0.0 || !std::isfinite(kappa)) {
    throw std::domain_error("bessel_a: kappa must be finite and >= 0");
  }
  if (kappa == 0.0) return 0.0;
  return bessel_i_ratios(kappa, 1)[0];
}

double bessel_a_inv(double r, double kappa_max) {
  if (r <= 0.0) return 0.0;
  if (r >= bessel_a(kappa_max)) return kappa_max;
  double lo = 0.0, hi = kappa_max;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_a(mid) < r ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace trpca
