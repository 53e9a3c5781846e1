#include "trpca/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace trpca {

namespace {

constexpr int kQuadNodes = 64;     // Gauss-Legendre nodes per period
constexpr int kTableNodes = 1024;  // arc-length table intervals
constexpr int kAlphaGrid = 1024;   // projection scan / CSV resolution

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre recurrence.
GaussLegendre gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return gl;
}

const GaussLegendre& quad64() {
  static const GaussLegendre gl = gauss_legendre(kQuadNodes);
  return gl;
}

double simpson_rule(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole,
                            double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_rule(a, fa, m, fm, flm);
  const double right = simpson_rule(m, fm, b, fb, frm);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm,
                              simpson_rule(a, fa, b, fb, fm), tol, 24);
}

// Monotone (Fritsch-Carlson) piecewise-cubic interpolant.
struct Pchip {
  std::vector<double> x, y, d;

  void build(std::vector<double> xs, std::vector<double> ys) {
    x = std::move(xs);
    y = std::move(ys);
    const std::size_t n = x.size();
    d.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x[i + 1] - x[i];
      delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
  }

  double eval(double t) const {
    const std::size_t n = x.size();
    std::size_t lo = std::upper_bound(x.begin(), x.end(), t) - x.begin();
    lo = lo == 0 ? 0 : std::min(lo - 1, n - 2);
    const double h = x[lo + 1] - x[lo];
    const double s = (t - x[lo]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y[lo] + h10 * h * d[lo] + h01 * y[lo + 1] +
           h11 * h * d[lo + 1];
  }
};

// C_m, S_m and their derivatives via the angle-addition recurrence.
struct SeriesEval {
  double C = 0.0, S = 0.0, Cp = 0.0, Sp = 0.0;
};

SeriesEval series_eval(const FourierRidge& fr, double theta) {
  SeriesEval e;
  e.C = 0.5 * fr.a[0];
  const double c1 = std::cos(theta), s1 = std::sin(theta);
  double ck = 1.0, sk = 0.0;  // cos(k theta), sin(k theta) at k = 0
  for (int k = 1; k <= fr.m; ++k) {
    const double ck1 = ck * c1 - sk * s1;
    const double sk1 = sk * c1 + ck * s1;
    ck = ck1;
    sk = sk1;
    e.C += fr.a[k] * ck;
    e.S += fr.b[k] * sk;
    e.Cp += -fr.a[k] * k * sk;
    e.Sp += fr.b[k] * k * ck;
  }
  return e;
}

double mu_index(const FourierRidge& fr) {
  return fr.index_coord == 1 ? fr.mu.theta1.value() : fr.mu.theta2.value();
}

double mu_other(const FourierRidge& fr) {
  return fr.index_coord == 1 ? fr.mu.theta2.value() : fr.mu.theta1.value();
}

}  // namespace

double fourier_rho(const FourierRidge& fr, double theta) {
  const SeriesEval e = series_eval(fr, theta);
  return std::atan2(e.S, e.C);
}

double fourier_rho_deriv(const FourierRidge& fr, double theta) {
  const SeriesEval e = series_eval(fr, theta);
  const double den = e.C * e.C + e.S * e.S;
  return (e.Sp * e.C - e.Cp * e.S) / den;
}

FourierRidge fourier_fit(const ConnectedRidge& ridge, int m) {
  if (m < 1) throw std::invalid_argument("fourier_fit: m must be >= 1");
  const std::size_t n_min = 2 * static_cast<std::size_t>(m) + 2;
  if (ridge.ordered_points.size() < n_min) {
    throw std::invalid_argument(
        "fourier_fit: fewer ridge points than 2m + 2");
  }

  FourierRidge fr;
  fr.m = m;
  fr.index_coord = ridge.index_coord;
  fr.mu = ridge.mu;
  fr.extended = ridge.extended;
  fr.source_points = ridge.ordered_points;

  const double mu_j = mu_index(fr);
  const double mu_l = mu_other(fr);

  // Zero-centered ridge function samples (x = relative index coordinate).
  std::vector<std::pair<double, double>> rel;
  rel.reserve(ridge.ordered_points.size());
  for (const TorusPoint& p : ridge.ordered_points) {
    const double pj = fr.index_coord == 1 ? p.theta1.value()
                                          : p.theta2.value();
    const double pl = fr.index_coord == 1 ? p.theta2.value()
                                          : p.theta1.value();
    rel.emplace_back(cmod(pj - mu_j), cmod(pl - mu_l));
  }
  std::sort(rel.begin(), rel.end());

  std::vector<double> xs, ys;
  xs.reserve(rel.size());
  ys.reserve(rel.size());
  for (const auto& [x, y] : rel) {
    if (!xs.empty() && x - xs.back() < 1e-9) {
      if (circ_dist(y, cmod(ys.back())) > 1e-6) {
        throw std::invalid_argument(
            "fourier_fit: ridge is multivalued in the index coordinate");
      }
      continue;
    }
    // Unwrap onto a continuous branch.
    ys.push_back(ys.empty() ? y : ys.back() + cmod(y - ys.back()));
    xs.push_back(x);
  }
  if (xs.size() < n_min) {
    throw std::invalid_argument("fourier_fit: fewer ridge points than 2m + 2");
  }

  // Winding of the closed loop (0 or +-2pi), for periodic padding.
  const double closure = ys.back() + cmod(ys.front() - ys.back());
  const double winding = kTwoPi * std::round((closure - ys.front()) / kTwoPi);

  const std::size_t pad = std::min<std::size_t>(4, xs.size() - 1);
  std::vector<double> px, py;
  px.reserve(xs.size() + 2 * pad);
  py.reserve(xs.size() + 2 * pad);
  for (std::size_t i = xs.size() - pad; i < xs.size(); ++i) {
    px.push_back(xs[i] - kTwoPi);
    py.push_back(ys[i] - winding);
  }
  px.insert(px.end(), xs.begin(), xs.end());
  py.insert(py.end(), ys.begin(), ys.end());
  for (std::size_t i = 0; i < pad; ++i) {
    px.push_back(xs[i] + kTwoPi);
    py.push_back(ys[i] + winding);
  }

  Pchip interp;
  interp.build(std::move(px), std::move(py));

  // a_k = (1/pi) int cos(R(t)) cos(kt) dt, b_k likewise with sines.
  const GaussLegendre& gl = quad64();
  fr.a.assign(m + 1, 0.0);
  fr.b.assign(m + 1, 0.0);
  for (int q = 0; q < kQuadNodes; ++q) {
    const double t = kPi * gl.nodes[q];
    const double w = kPi * gl.weights[q];
    const double r = interp.eval(t);
    const double cr = std::cos(r), sr = std::sin(r);
    const double c1 = std::cos(t), s1 = std::sin(t);
    double ck = 1.0, sk = 0.0;
    fr.a[0] += w / kPi * cr;
    for (int k = 1; k <= m; ++k) {
      const double ck1 = ck * c1 - sk * s1;
      const double sk1 = sk * c1 + ck * s1;
      ck = ck1;
      sk = sk1;
      fr.a[k] += w / kPi * cr * ck;
      fr.b[k] += w / kPi * sr * sk;
    }
  }
  fr.rho0 = fourier_rho(fr, 0.0);
  return fr;
}

TorusPoint eval_curve(const FourierRidge& fr, double phi) {
  const double psi = cmod(phi - mu_index(fr));
  const double other = cmod(mu_other(fr) + fourier_rho(fr, psi) - fr.rho0);
  return fr.index_coord == 1 ? TorusPoint(cmod(phi), other)
                             : TorusPoint(other, cmod(phi));
}

FourierRidge arclength_param(FourierRidge fr) {
  auto speed = [&fr](double t) {
    const double rp = fourier_rho_deriv(fr, t);
    return std::sqrt(1.0 + rp * rp);
  };

  fr.arclen_t.resize(kTableNodes + 1);
  fr.arclen_L.resize(kTableNodes + 1);
  fr.arclen_L[0] = 0.0;
  for (int i = 0; i <= kTableNodes; ++i) {
    fr.arclen_t[i] = kTwoPi * i / kTableNodes;
  }
  for (int i = 0; i < kTableNodes; ++i) {
    const double seg = adaptive_simpson(speed, fr.arclen_t[i],
                                        fr.arclen_t[i + 1], 1e-12);
    if (!(seg > 0.0) || !std::isfinite(seg)) {
      throw std::runtime_error("arclength_param: non-monotone length table");
    }
    fr.arclen_L[i + 1] = fr.arclen_L[i] + seg;
  }
  fr.total_length_R = fr.arclen_L[kTableNodes];
  fr.arclength_ready = true;

  fr.alpha_cache.resize(kAlphaGrid);
  for (int i = 0; i < kAlphaGrid; ++i) {
    fr.alpha_cache[i] = eval_scaled(fr, -kPi + kTwoPi * i / kAlphaGrid);
  }
  return fr;
}

namespace {

// t = L^{-1}(s): table bracket, monotone (linear) interpolation, one Newton
// step with a 5-point Gauss-Legendre segment integral.
double arclen_inverse(const FourierRidge& fr, double s) {
  const auto& L = fr.arclen_L;
  const auto& T = fr.arclen_t;
  const std::size_t hi =
      std::min<std::size_t>(std::upper_bound(L.begin(), L.end(), s) -
                                L.begin(),
                            L.size() - 1);
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  const double seg = L[hi] - L[lo];
  double t = seg > 0.0 ? T[lo] + (s - L[lo]) / seg * (T[hi] - T[lo]) : T[lo];

  auto speed = [&fr](double u) {
    const double rp = fourier_rho_deriv(fr, u);
    return std::sqrt(1.0 + rp * rp);
  };
  // L(t) - s via small-order quadrature from the bracket's left node.
  static const double n5[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double w5[] = {0.2369268850561891, 0.4786286704993665,
                              0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  double acc = 0.0;
  const double half = 0.5 * (t - T[lo]);
  for (int q = 0; q < 5; ++q) {
    acc += w5[q] * speed(T[lo] + half * (1.0 + n5[q]));
  }
  const double L_t = L[lo] + half * acc;
  t -= (L_t - s) / speed(t);
  return std::clamp(t, T[lo], T[hi]);
}

}  // namespace

TorusPoint eval_scaled(const FourierRidge& fr, double alpha) {
  if (!fr.arclength_ready) {
    throw std::logic_error("eval_scaled: call arclength_param first");
  }
  const double aw = cmod(alpha);
  const double s = fr.total_length_R / kTwoPi * (aw < 0.0 ? aw + kTwoPi : aw);
  const double t = arclen_inverse(fr, s);
  return eval_curve(fr, mu_index(fr) + t);
}

Vec2 scaled_tangent(const FourierRidge& fr, double alpha) {
  if (!fr.arclength_ready) {
    throw std::logic_error("scaled_tangent: call arclength_param first");
  }
  const double aw = cmod(alpha);
  const double s = fr.total_length_R / kTwoPi * (aw < 0.0 ? aw + kTwoPi : aw);
  const double t = arclen_inverse(fr, s);
  const double rp = fourier_rho_deriv(fr, t);
  const double norm = std::sqrt(1.0 + rp * rp);
  return fr.index_coord == 1 ? Vec2{1.0 / norm, rp / norm}
                             : Vec2{rp / norm, 1.0 / norm};
}

Projection project(const FourierRidge& fr, const TorusPoint& p) {
  if (!fr.arclength_ready) {
    throw std::logic_error("project: call arclength_param first");
  }
  const int n = kAlphaGrid;
  const double step = kTwoPi / n;
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) {
    dist[i] = torus_dist(p, fr.alpha_cache[i]);
  }

  auto objective = [&](double alpha) {
    return torus_dist(p, eval_scaled(fr, alpha));
  };
  auto golden = [&](double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    while (b - a > 1e-8) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = objective(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = objective(x2);
      }
    }
    return 0.5 * (a + b);
  };

  // Refine every grid-local minimum, then keep the best (ties -> smaller
  // alpha, flagged).
  Projection best;
  best.dist = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> refined;  // (alpha, dist)
  for (int i = 0; i < n; ++i) {
    const double prev = dist[(i + n - 1) % n];
    const double next = dist[(i + 1) % n];
    if (dist[i] <= prev && dist[i] <= next) {
      const double center = -kPi + step * i;
      const double alpha = cmod(golden(center - step, center + step));
      refined.emplace_back(alpha, objective(alpha));
    }
  }
  for (const auto& [alpha, d] : refined) {
    if (d < best.dist - 1e-15 ||
        (std::fabs(d - best.dist) <= 1e-15 && alpha < best.alpha)) {
      best.alpha = alpha;
      best.dist = d;
    }
  }
  for (const auto& [alpha, d] : refined) {
    if (std::fabs(d - best.dist) < 1e-9 &&
        circ_dist(alpha, best.alpha) > 1e-6) {
      best.tied = true;
      if (alpha < best.alpha) {
        best.alpha = alpha;
        best.dist = d;
      }
    }
  }
  best.foot = eval_scaled(fr, best.alpha);
  best.dist = torus_dist(p, best.foot);
  return best;
}

void write_ridge_csv(const FourierRidge& fr, std::ostream& os) {
  char line[128];
  os << "alpha,theta1,theta2\n";
  for (int i = 0; i < kAlphaGrid; ++i) {
    const double alpha = -kPi + kTwoPi * i / kAlphaGrid;
    const TorusPoint pt = eval_scaled(fr, alpha);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", alpha,
                  pt.theta1.value(), pt.theta2.value());
    os << line;
  }
}

void write_ridge_csv(const FourierRidge& fr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_ridge_csv: cannot open " + path);
  write_ridge_csv(fr, out);
}

}  // namespace trpca
