#include "trpca/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trpca/parallel.hpp"

namespace trpca {

DensityOracle make_oracle(const ModelParams& params) {
  DensityOracle oracle;
  oracle.domain = DomainKind::periodic;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BsvmParams>) {
          oracle.evaluate = [m](double t1, double t2) {
            return bsvm_derivatives(TorusPoint(t1, t2), m);
          };
        } else if constexpr (std::is_same_v<T, BwcParams>) {
          oracle.evaluate = [m](double t1, double t2) {
            return bwc_derivatives(TorusPoint(t1, t2), m);
          };
        } else {
          throw std::invalid_argument(
              "make_oracle: wrapped normal ridges are not supported");
        }
      },
      params);
  return oracle;
}

HessianEig hessian_eig2(double u, double v, double w) {
  if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(w)) {
    throw std::domain_error("hessian_eig2: non-finite Hessian entries");
  }
  HessianEig e;
  const double s = std::sqrt((w - u) * (w - u) + 4.0 * v * v);
  e.lambda1 = 0.5 * (u + w + s);
  e.lambda2 = 0.5 * (u + w - s);
  e.degenerate = std::fabs(w - u) < 1e-12 && std::fabs(v) < 1e-12;
  const Vec2 raw{2.0 * u - 2.0 * w + 2.0 * v - 2.0 * s,
                 w - u + 4.0 * v - s};
  const double n = std::hypot(raw.x, raw.y);
  if (!e.degenerate && n > 0.0) {
    e.u2 = {raw.x / n, raw.y / n};
    e.u1 = {-e.u2.y, e.u2.x};
  }
  return e;
}

double implicit_expr(const DensityDerivatives& d) {
  const double s = std::sqrt((d.w - d.u) * (d.w - d.u) + 4.0 * d.v * d.v);
  return d.d1 * (2.0 * d.u - 2.0 * d.w + 2.0 * d.v - 2.0 * s) +
         d.d2 * (d.w - d.u + 4.0 * d.v - s);
}

bool eigenvalue_condition(const DensityDerivatives& d) {
  const double s = std::sqrt((d.u - d.w) * (d.u - d.w) + 4.0 * d.v * d.v);
  return 0.5 * (d.u + d.w - s) < 0.0;
}

namespace {

// Magnitude of the unnormalized u2 of the closed form, for residual scaling.
double u2_raw_norm(const DensityDerivatives& d) {
  const double s = std::sqrt((d.w - d.u) * (d.w - d.u) + 4.0 * d.v * d.v);
  return std::hypot(2.0 * d.u - 2.0 * d.w + 2.0 * d.v - 2.0 * s,
                    d.w - d.u + 4.0 * d.v - s);
}

// The raw expression scales with |grad| * |u2|, which varies over orders of
// magnitude across T^2 for concentrated densities; the tolerance is applied
// to this dimensionless form instead.
double scaled_residual(const DensityDerivatives& d) {
  const double scale = std::hypot(d.d1, d.d2) * u2_raw_norm(d);
  return std::fabs(implicit_expr(d)) / std::max(1.0, scale);
}

bool is_degenerate(const DensityDerivatives& d) {
  return std::fabs(d.w - d.u) < 1e-12 && std::fabs(d.v) < 1e-12;
}

struct ColumnHit {
  double scan_value = 0.0;
  double residual = 0.0;
};

}  // namespace

RidgeSet ridge_implicit(const DensityOracle& oracle, int index_coord,
                        int grid_n, double tol) {
  if (grid_n < 64) throw std::invalid_argument("ridge_implicit: grid_n < 64");
  if (!(tol > 0.0)) throw std::invalid_argument("ridge_implicit: tol <= 0");
  if (index_coord != 1 && index_coord != 2) {
    throw std::invalid_argument("ridge_implicit: index_coord must be 1 or 2");
  }

  const bool periodic = oracle.domain == DomainKind::periodic;
  const double ix_lo = periodic ? -kPi : (index_coord == 1 ? oracle.x_lo
                                                           : oracle.y_lo);
  const double ix_hi = periodic ? kPi : (index_coord == 1 ? oracle.x_hi
                                                          : oracle.y_hi);
  const double sc_lo = periodic ? -kPi : (index_coord == 1 ? oracle.y_lo
                                                           : oracle.x_lo);
  const double sc_hi = periodic ? kPi : (index_coord == 1 ? oracle.y_hi
                                                          : oracle.x_hi);
  // Periodic grids leave out the right endpoint (identified with the left);
  // planar grids include it.
  const int n_idx = grid_n;
  const double h_idx = (ix_hi - ix_lo) / (periodic ? grid_n : grid_n - 1);
  const double h_scan = (sc_hi - sc_lo) / (periodic ? grid_n : grid_n - 1);

  auto eval_at = [&](double idx_val, double scan_val) {
    return index_coord == 1 ? oracle.evaluate(idx_val, scan_val)
                            : oracle.evaluate(scan_val, idx_val);
  };

  std::vector<std::vector<ColumnHit>> hits(n_idx);
  parallel_for(n_idx, [&](std::size_t col) {
    const double idx_val = ix_lo + h_idx * static_cast<double>(col);
    std::vector<double> expr(grid_n);
    for (int j = 0; j < grid_n; ++j) {
      expr[j] = implicit_expr(eval_at(idx_val, sc_lo + h_scan * j));
    }

    auto try_accept = [&](double scan_val) {
      const DensityDerivatives d = eval_at(idx_val, scan_val);
      const double res = scaled_residual(d);
      if (res < tol && eigenvalue_condition(d) && !is_degenerate(d)) {
        hits[col].push_back({scan_val, res});
      }
    };

    // Grid nodes where the expression vanishes identically (edge cases)
    // are candidate roots themselves; sign changes get bisected.
    const int n_brackets = periodic ? grid_n : grid_n - 1;
    for (int j = 0; j < grid_n; ++j) {
      if (expr[j] == 0.0) try_accept(sc_lo + h_scan * j);
    }
    for (int j = 0; j < n_brackets; ++j) {
      const double ea = expr[j];
      const double eb = expr[(j + 1) % grid_n];
      if (!(ea * eb < 0.0)) continue;
      double a = sc_lo + h_scan * j;
      double b = a + h_scan;  // wrap bracket extends past the seam
      double fa = ea;
      double mid = 0.5 * (a + b);
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (a + b);
        const DensityDerivatives dm = eval_at(idx_val, mid);
        if (scaled_residual(dm) < tol) break;
        const double fm = implicit_expr(dm);
        if (fa * fm < 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      try_accept(periodic ? cmod(mid) : mid);
    }
  });

  RidgeSet out;
  out.method = RidgeMethod::implicit_eq;
  out.index_coord = index_coord;
  for (int col = 0; col < n_idx; ++col) {
    const double idx_val = ix_lo + h_idx * static_cast<double>(col);
    for (const ColumnHit& h : hits[col]) {
      out.points.emplace_back(index_coord == 1 ? idx_val : h.scan_value,
                              index_coord == 1 ? h.scan_value : idx_val);
      out.residuals.push_back(h.residual);
    }
  }
  return out;
}

std::vector<Vec2> grid_starts(const DensityOracle& oracle, int per_axis) {
  std::vector<Vec2> starts;
  starts.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  const bool periodic = oracle.domain == DomainKind::periodic;
  const double x_lo = periodic ? -kPi : oracle.x_lo;
  const double x_hi = periodic ? kPi : oracle.x_hi;
  const double y_lo = periodic ? -kPi : oracle.y_lo;
  const double y_hi = periodic ? kPi : oracle.y_hi;
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      starts.push_back({x_lo + (x_hi - x_lo) * (i + 0.5) / per_axis,
                        y_lo + (y_hi - y_lo) * (j + 0.5) / per_axis});
    }
  }
  return starts;
}

RidgeSet ridge_euler(const DensityOracle& oracle,
                     const std::vector<Vec2>& starts, double h,
                     double conv_tol, int max_iter) {
  if (!(h > 0.0)) throw std::invalid_argument("ridge_euler: h <= 0");
  if (starts.empty()) throw std::invalid_argument("ridge_euler: no starts");

  const bool periodic = oracle.domain == DomainKind::periodic;
  struct Endpoint {
    Vec2 p;
    double res = 0.0;
    bool keep = false;
    bool converged = false;
  };
  std::vector<Endpoint> ends(starts.size());

  parallel_for(starts.size(), [&](std::size_t i) {
    Vec2 x = starts[i];
    if (periodic) x = {cmod(x.x), cmod(x.y)};
    for (int it = 0; it < max_iter; ++it) {
      const DensityDerivatives d = oracle.evaluate(x.x, x.y);
      const HessianEig eig = hessian_eig2(d.u, d.v, d.w);
      if (eig.degenerate) return;  // projected direction undefined; drop
      const double proj = d.d1 * eig.u2.x + d.d2 * eig.u2.y;
      const Vec2 eta{proj * eig.u2.x, proj * eig.u2.y};
      const double eta_norm = std::hypot(eta.x, eta.y);
      if (eta_norm < conv_tol) {
        ends[i].p = x;
        ends[i].res = eta_norm;
        ends[i].converged = true;
        ends[i].keep = eigenvalue_condition(d);
        return;
      }
      x.x += h * eta.x;
      x.y += h * eta.y;
      if (periodic) {
        x = {cmod(x.x), cmod(x.y)};
      } else if (x.x < oracle.x_lo || x.x > oracle.x_hi ||
                 x.y < oracle.y_lo || x.y > oracle.y_hi) {
        return;  // left the box; drop
      }
    }
  });

  RidgeSet out;
  out.method = RidgeMethod::euler;
  std::size_t any_converged = 0;
  for (const Endpoint& e : ends) {
    if (e.converged) ++any_converged;
    if (e.keep) {
      out.points.emplace_back(e.p.x, e.p.y);
      out.residuals.push_back(e.res);
    } else if (!e.converged) {
      ++out.dropped;
    }
  }
  if (any_converged == 0) {
    throw std::runtime_error("ridge_euler: no start converged");
  }
  return out;
}

ConnectedRidge connected_component(const RidgeSet& ridge, TorusPoint mu,
                                   int dependence_sign, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("connected_component: delta <= 0");
  }
  constexpr double kAxisEps = 1e-9;

  // Quadrant pre-filter relative to mu (kept when on an axis).
  std::vector<TorusPoint> pool;
  pool.reserve(ridge.points.size());
  for (const TorusPoint& p : ridge.points) {
    if (dependence_sign != 0) {
      const double r1 = cmod(p.theta1 - mu.theta1);
      const double r2 = cmod(p.theta2 - mu.theta2);
      const bool on_axis = std::fabs(r1) < kAxisEps || std::fabs(r2) < kAxisEps;
      const int s = r1 * r2 > 0.0 ? 1 : (r1 * r2 < 0.0 ? -1 : 0);
      if (!on_axis && s != dependence_sign) continue;
    }
    pool.push_back(p);
  }

  // Seed: mu itself must touch the ridge.
  double best = delta;
  bool seeded = false;
  for (const TorusPoint& p : pool) {
    const double d = torus_dist(p, mu);
    if (d <= best) {
      best = d;
      seeded = true;
    }
  }
  if (!seeded) {
    throw std::runtime_error(
        "connected_component: mu is not within delta of any ridge point");
  }

  // March column-by-column along the index coordinate in both directions
  // from mu, taking in each column the root closest to the previous point.
  // This keeps the component single-valued in the index coordinate and
  // follows the through-mu branch across tangencies with other branches.
  const int idx = ridge.index_coord;
  auto index_of = [&](const TorusPoint& p) {
    return idx == 1 ? p.theta1.value() : p.theta2.value();
  };

  std::vector<double> keys;  // distinct column positions, ascending
  keys.reserve(pool.size());
  std::vector<std::vector<TorusPoint>> columns;
  {
    std::vector<std::size_t> order(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return index_of(pool[a]) < index_of(pool[b]);
    });
    for (std::size_t k : order) {
      const double key = index_of(pool[k]);
      if (keys.empty() || key - keys.back() > 1e-12) {
        keys.push_back(key);
        columns.emplace_back();
      }
      columns.back().push_back(pool[k]);
    }
  }

  const std::size_t n_cols = keys.size();
  std::vector<bool> taken(n_cols, false);
  std::vector<TorusPoint> members{mu};

  // mu occupies its own column if one coincides.
  const double mu_key = index_of(mu);
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (std::fabs(keys[c] - mu_key) <= 1e-12) taken[c] = true;
  }

  for (int dir : {+1, -1}) {
    // first column strictly on this side of mu
    std::size_t start = 0;
    {
      const auto it = std::upper_bound(keys.begin(), keys.end(), mu_key);
      const std::size_t right = static_cast<std::size_t>(
          (it - keys.begin()) % static_cast<std::ptrdiff_t>(n_cols));
      start = dir > 0 ? right : (right + n_cols - 1) % n_cols;
      if (dir < 0 && std::fabs(keys[start] - mu_key) <= 1e-12) {
        start = (start + n_cols - 1) % n_cols;
      }
    }
    TorusPoint current = mu;
    std::size_t c = start;
    for (std::size_t step = 0; step < n_cols; ++step) {
      if (taken[c]) break;  // wrapped into the other direction's territory
      const TorusPoint* best = nullptr;
      double best_d = delta;
      for (const TorusPoint& cand : columns[c]) {
        const double d = torus_dist(cand, current);
        if (d <= best_d) {
          best_d = d;
          best = &cand;
        }
      }
      if (!best) break;  // no continuation within the chaining radius
      taken[c] = true;
      members.push_back(*best);
      current = *best;
      c = dir > 0 ? (c + 1) % n_cols : (c + n_cols - 1) % n_cols;
    }
  }

  ConnectedRidge out;
  out.mu = mu;
  out.quadrant_sign = dependence_sign;
  out.index_coord = idx;
  out.ordered_points = std::move(members);

  // Order along the index coordinate, starting from mu.
  auto key_rel = [&](const TorusPoint& p) {
    return cmod(index_of(p) - mu_key);
  };
  std::stable_sort(out.ordered_points.begin() + 1, out.ordered_points.end(),
                   [&](const TorusPoint& a, const TorusPoint& b) {
                     return key_rel(a) < key_rel(b);
                   });
  std::rotate(out.ordered_points.begin() + 1,
              std::partition_point(out.ordered_points.begin() + 1,
                                   out.ordered_points.end(),
                                   [&](const TorusPoint& p) {
                                     return key_rel(p) < 0.0;
                                   }),
              out.ordered_points.end());
  return out;
}

namespace {

struct EdgeParams {
  double mu1, mu2, conc1, conc2, dep;
  bool bwc = false;
  double c1 = 0.0, c3 = 0.0, c4 = 0.0;
};

EdgeParams extract_edge_params(const ModelParams& params) {
  return std::visit(
      [](const auto& m) -> EdgeParams {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BsvmParams>) {
          return {m.mu1, m.mu2, m.kappa1, m.kappa2, m.lambda, false, 0, 0, 0};
        } else if constexpr (std::is_same_v<T, BwcParams>) {
          return {m.mu1, m.mu2, m.xi1, m.xi2, m.rho, true, m.c1, m.c3, m.c4};
        } else {
          throw std::invalid_argument(
              "explicit_edge_ridge: wrapped normal has no edge-case ridge");
        }
      },
      params);
}

}  // namespace

ConnectedRidge explicit_edge_ridge(const ModelParams& params, EdgeCase which) {
  const EdgeParams ep = extract_edge_params(params);
  const bool axis = which == EdgeCase::axis_horizontal ||
                    which == EdgeCase::axis_vertical;
  if (axis && std::fabs(ep.dep) > 1e-12) {
    throw std::invalid_argument(
        "explicit_edge_ridge: axis case needs zero dependence");
  }
  if (!axis && std::fabs(ep.conc1 - ep.conc2) > 1e-12) {
    throw std::invalid_argument(
        "explicit_edge_ridge: diagonal case needs equal concentrations");
  }

  constexpr int kGrid = 512;
  ConnectedRidge out;
  out.mu = TorusPoint(ep.mu1, ep.mu2);

  switch (which) {
    case EdgeCase::axis_horizontal:
      out.index_coord = 1;
      out.quadrant_sign = 0;
      break;
    case EdgeCase::axis_vertical:
      out.index_coord = 2;
      out.quadrant_sign = 0;
      break;
    case EdgeCase::diagonal_pos:
      out.index_coord = 1;
      out.quadrant_sign = 1;
      break;
    case EdgeCase::diagonal_neg:
      out.index_coord = 1;
      out.quadrant_sign = -1;
      break;
  }

  if (!axis) {
    // Full diagonal imposed; flag when the eigenvalue condition only
    // guarantees a sub-arc (cos theta bounded), so downstream users can see
    // the extension.
    if (ep.bwc) {
      out.extended = ep.c1 > 1e-15 &&
                     (ep.c3 + std::fabs(ep.c4)) / ep.c1 <= 1.0;
    } else {
      out.extended = ep.conc1 > std::fabs(ep.dep);
    }
  }

  out.ordered_points.reserve(kGrid);
  for (int k = 0; k < kGrid; ++k) {
    const double t = kTwoPi * k / kGrid;
    switch (which) {
      case EdgeCase::axis_horizontal:
        out.ordered_points.emplace_back(cmod(ep.mu1 + t), ep.mu2);
        break;
      case EdgeCase::axis_vertical:
        out.ordered_points.emplace_back(ep.mu1, cmod(ep.mu2 + t));
        break;
      case EdgeCase::diagonal_pos:
        out.ordered_points.emplace_back(cmod(ep.mu1 + t), cmod(ep.mu2 + t));
        break;
      case EdgeCase::diagonal_neg:
        out.ordered_points.emplace_back(cmod(ep.mu1 + t), cmod(ep.mu2 - t));
        break;
    }
  }
  return out;
}

}  // namespace trpca
