#include "trpca/torus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trpca {

double cmod(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("cmod: non-finite angle");
  }
  double m = std::fmod(x + kPi, kTwoPi);
  if (m < 0.0) m += kTwoPi;
  double r = m - kPi;
  if (r >= kPi) r = -kPi;  // rounding of m up to 2*pi
  return r;
}

double circ_dist(double a, double b) {
  double d = std::fabs(a - b);
  if (d > kTwoPi) d = std::fmod(d, kTwoPi);
  return std::min(d, kTwoPi - d);
}

double torus_dist(const TorusPoint& a, const TorusPoint& b) {
  const double d1 = circ_dist(a.theta1, b.theta1);
  const double d2 = circ_dist(a.theta2, b.theta2);
  return std::sqrt(d1 * d1 + d2 * d2);
}

Angle circular_mean(std::span<const double> sample) {
  if (sample.empty()) {
    throw std::invalid_argument("circular_mean: empty sample");
  }
  double s = 0.0, c = 0.0;
  for (double t : sample) {
    s += std::sin(t);
    c += std::cos(t);
  }
  s /= static_cast<double>(sample.size());
  c /= static_cast<double>(sample.size());
  if (std::sqrt(s * s + c * c) <= 1e-12) {
    throw std::runtime_error("circular_mean: resultant length ~ 0, mean undefined");
  }
  return Angle(std::atan2(s, c));
}

double mean_resultant_length(std::span<const double> sample) {
  if (sample.empty()) {
    throw std::invalid_argument("mean_resultant_length: empty sample");
  }
  double s = 0.0, c = 0.0;
  for (double t : sample) {
    s += std::sin(t);
    c += std::cos(t);
  }
  s /= static_cast<double>(sample.size());
  c /= static_cast<double>(sample.size());
  return std::sqrt(s * s + c * c);
}

double circular_variance(std::span<const double> sample) {
  return 1.0 - mean_resultant_length(sample);
}

namespace {

double frechet_objective(double phi, std::span<const double> sample) {
  double acc = 0.0;
  for (double t : sample) {
    const double d = circ_dist(phi, t);
    acc += d * d;
  }
  return acc;
}

// Golden-section minimization on [lo, hi]; the objective is only piecewise
// smooth, so this refines a bracket that already contains the minimizer.
double golden_refine(double lo, double hi, std::span<const double> sample) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = frechet_objective(x1, sample);
  double f2 = frechet_objective(x2, sample);
  while (b - a > 1e-12) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = frechet_objective(x1, sample);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = frechet_objective(x2, sample);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

CircularFrechet frechet_circular(std::span<const double> sample) {
  if (sample.empty()) {
    throw std::invalid_argument("frechet_circular: empty sample");
  }

  constexpr int kGrid = 1000;
  const double step = kTwoPi / kGrid;

  std::vector<double> candidates;
  candidates.reserve(sample.size() + kGrid);
  for (double t : sample) candidates.push_back(cmod(t));
  for (int i = 0; i < kGrid; ++i) candidates.push_back(-kPi + i * step);

  std::vector<double> values;
  values.reserve(candidates.size());
  double min_val = frechet_objective(candidates.front(), sample);
  for (double phi : candidates) {
    values.push_back(frechet_objective(phi, sample));
    min_val = std::min(min_val, values.back());
  }

  // Ties within 1e-12 (e.g. antipodal pairs, symmetric samples) break
  // toward the smallest angle, deterministically.
  CircularFrechet out;
  double best_phi = kPi;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (values[i] <= min_val + 1e-12) {
      if (circ_dist(candidates[i], best_phi) > 1e-6 && best_phi < kPi) {
        out.tie = true;
      }
      best_phi = std::min(best_phi, candidates[i]);
    }
  }

  // Refine inside a one-grid-step bracket around the winner. The wrap is
  // immaterial because frechet_objective takes any real phi.
  const double refined = golden_refine(best_phi - step, best_phi + step,
                                       sample);
  const double refined_val = frechet_objective(refined, sample);
  if (refined_val <= min_val) {
    out.mean = cmod(refined);
    out.variance = refined_val;
  } else {
    out.mean = cmod(best_phi);
    out.variance = frechet_objective(best_phi, sample);
  }
  return out;
}

FrechetSummary frechet_summary(std::span<const TorusPoint> sample) {
  if (sample.empty()) {
    throw std::invalid_argument("frechet_summary: empty sample");
  }
  const std::vector<double> c1 = coord(sample, 1);
  const std::vector<double> c2 = coord(sample, 2);
  const CircularFrechet f1 = frechet_circular(c1);
  const CircularFrechet f2 = frechet_circular(c2);

  FrechetSummary out;
  out.mean = TorusPoint(f1.mean, f2.mean);
  out.marginal_variances = {f1.variance, f2.variance};
  out.total_variance = f1.variance + f2.variance;
  out.tie = f1.tie || f2.tie;
  return out;
}

std::vector<double> coord(std::span<const TorusPoint> pts, int which) {
  std::vector<double> out;
  out.reserve(pts.size());
  for (const TorusPoint& p : pts) {
    out.push_back(which == 1 ? p.theta1.value() : p.theta2.value());
  }
  return out;
}

}  // namespace trpca
