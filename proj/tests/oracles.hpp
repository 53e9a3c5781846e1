#pragma once

// Test-only oracles, independent of the implementation paths they check:
// plain-grid integrators and minimizers, central finite differences, a
// characteristic-polynomial eigensolver, dense projection scans, polyline
// lengths, Hausdorff distances, and a planar Gaussian density oracle.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "trpca/curve.hpp"
#include "trpca/ridge.hpp"
#include "trpca/torus.hpp"

namespace oracles {

using trpca::kPi;
using trpca::kTwoPi;

// Rectangle rule over T^2; spectrally accurate for smooth periodic f.
inline double integrate_torus(const std::function<double(double, double)>& f,
                              int n) {
  double acc = 0.0;
  const double h = kTwoPi / n;
  for (int i = 0; i < n; ++i) {
    const double t1 = -kPi + h * i;
    for (int j = 0; j < n; ++j) {
      acc += f(t1, -kPi + h * j);
    }
  }
  return acc * h * h;
}

struct Fd2 {
  double l1, l2, l11, l12, l22;  // first/second central differences
};

inline Fd2 finite_diff2(const std::function<double(double, double)>& f,
                        double x, double y, double h) {
  Fd2 d;
  d.l1 = (f(x + h, y) - f(x - h, y)) / (2 * h);
  d.l2 = (f(x, y + h) - f(x, y - h)) / (2 * h);
  d.l11 = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
  d.l22 = (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h);
  d.l12 = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) +
           f(x - h, y - h)) /
          (4 * h * h);
  return d;
}

struct EigPair {
  double lambda1, lambda2;
  double v1x, v1y, v2x, v2y;
};

// Quadratic-formula eigensolver for [[u, v], [v, w]].
inline EigPair eig2_bruteforce(double u, double v, double w) {
  EigPair e;
  const double tr = u + w;
  const double det = u * w - v * v;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  e.lambda1 = 0.5 * (tr + disc);
  e.lambda2 = 0.5 * (tr - disc);
  auto vec_for = [&](double lam, double& vx, double& vy) {
    // null space of [[u - lam, v], [v, w - lam]], larger row wins
    const double r1 = std::hypot(u - lam, v);
    const double r2 = std::hypot(v, w - lam);
    if (r1 >= r2) {
      vx = -v;
      vy = u - lam;
    } else {
      vx = w - lam;
      vy = -v;
    }
    const double n = std::hypot(vx, vy);
    if (n > 0) {
      vx /= n;
      vy /= n;
    }
  };
  vec_for(e.lambda1, e.v1x, e.v1y);
  vec_for(e.lambda2, e.v2x, e.v2y);
  return e;
}

// Exhaustive grid minimizer of the circular Frechet objective; same
// smallest-angle tie rule as the library, so exact-tie inputs agree.
struct GridFrechet {
  double mean;
  double variance;
};

inline GridFrechet frechet_grid_oracle(const std::vector<double>& sample,
                                       int grid = 2000) {
  auto objective = [&](double phi) {
    double acc = 0.0;
    for (double t : sample) {
      const double d = trpca::circ_dist(phi, t);
      acc += d * d;
    }
    return acc;
  };
  double best_val = objective(-kPi);
  for (int i = 1; i < grid; ++i) {
    best_val = std::min(best_val, objective(-kPi + kTwoPi * i / grid));
  }
  double best_phi = kPi;
  for (int i = 0; i < grid; ++i) {
    const double phi = -kPi + kTwoPi * i / grid;
    if (objective(phi) <= best_val + 1e-12 && phi < best_phi) best_phi = phi;
  }
  return {best_phi, objective(best_phi)};
}

// Dense scan projection onto the scaled arc-length curve.
struct DenseProjection {
  double alpha;
  double dist;
};

inline DenseProjection project_dense(const trpca::FourierRidge& fr,
                                     const trpca::TorusPoint& p,
                                     int grid = 100000) {
  DenseProjection best{-kPi, 1e300};
  for (int i = 0; i < grid; ++i) {
    const double alpha = -kPi + kTwoPi * i / grid;
    const double d = trpca::torus_dist(p, trpca::eval_scaled(fr, alpha));
    if (d < best.dist) {
      best.dist = d;
      best.alpha = alpha;
    }
  }
  return best;
}

// Polyline arc length along the curve from alpha0 to alpha0 + span (signed
// span, traversed in its own direction).
inline double polyline_length(const trpca::FourierRidge& fr, double alpha0,
                              double span, int steps = 100000) {
  double acc = 0.0;
  trpca::TorusPoint prev = trpca::eval_scaled(fr, alpha0);
  for (int i = 1; i <= steps; ++i) {
    const trpca::TorusPoint cur =
        trpca::eval_scaled(fr, alpha0 + span * i / steps);
    acc += trpca::torus_dist(prev, cur);
    prev = cur;
  }
  return acc;
}

inline double hausdorff(const std::vector<trpca::TorusPoint>& a,
                        const std::vector<trpca::TorusPoint>& b) {
  auto one_sided = [](const std::vector<trpca::TorusPoint>& from,
                      const std::vector<trpca::TorusPoint>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double nearest = 1e300;
      for (const auto& q : to) {
        nearest = std::min(nearest, trpca::torus_dist(p, q));
      }
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

// Planar Gaussian density oracle (optionally rotated): derivative
// components normalized by f, matching the library convention.
inline trpca::DensityOracle gaussian_oracle(double mx, double my, double sxx,
                                            double sxy, double syy,
                                            double box = kPi) {
  trpca::DensityOracle oracle;
  oracle.domain = trpca::DomainKind::planar;
  oracle.x_lo = -box;
  oracle.x_hi = box;
  oracle.y_lo = -box;
  oracle.y_hi = box;
  const double det = sxx * syy - sxy * sxy;
  const double i11 = syy / det, i22 = sxx / det, i12 = -sxy / det;
  const double norm = 1.0 / (kTwoPi * std::sqrt(det));
  oracle.evaluate = [=](double x, double y) {
    const double dx = x - mx, dy = y - my;
    const double g1 = i11 * dx + i12 * dy;  // Sigma^{-1} (x - mu)
    const double g2 = i12 * dx + i22 * dy;
    trpca::DensityDerivatives d;
    d.f = norm * std::exp(-0.5 * (dx * g1 + dy * g2));
    d.d1 = -g1;
    d.d2 = -g2;
    d.u = g1 * g1 - i11;
    d.v = g1 * g2 - i12;
    d.w = g2 * g2 - i22;
    return d;
  };
  return oracle;
}

}  // namespace oracles
