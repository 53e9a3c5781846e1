#include "trpca/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trpca/parallel.hpp"

namespace trpca {

Scores compute_scores(const FourierRidge& curve,
                      std::span<const TorusPoint> sample) {
  if (sample.empty()) {
    throw std::invalid_argument("compute_scores: empty sample");
  }

  // m2: the paper's max over T^2 of the projection distance, approximated
  // on a 128 x 128 grid.
  constexpr int kGrid = 128;
  std::vector<double> row_max(kGrid, 0.0);
  parallel_for(kGrid, [&](std::size_t i) {
    const double t1 = -kPi + kTwoPi * static_cast<double>(i) / kGrid;
    double best = 0.0;
    for (int j = 0; j < kGrid; ++j) {
      const double t2 = -kPi + kTwoPi * j / kGrid;
      best = std::max(best, project(curve, TorusPoint(t1, t2)).dist);
    }
    row_max[i] = best;
  });
  const double m2 = *std::max_element(row_max.begin(), row_max.end());
  if (m2 < 1e-9) {
    throw std::runtime_error("compute_scores: degenerate m2 (curve fills T^2)");
  }

  Scores out;
  out.m2 = m2;
  out.s1.resize(sample.size());
  out.s2.resize(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    const TorusPoint& p = sample[i];
    const Projection proj = project(curve, p);
    out.s1[i] = proj.alpha;
    double sign = 1.0;  // points on the ridge get sign(0) := +
    if (proj.dist >= 1e-9) {
      const Vec2 tan = scaled_tangent(curve, proj.alpha);
      const double ang_t = std::atan2(tan.y, tan.x);
      const double n1 = cmod(proj.foot.theta1 - p.theta1);
      const double n2 = cmod(proj.foot.theta2 - p.theta2);
      const double ang_n = std::atan2(n2, n1);
      sign = (ang_t - ang_n) >= 0.0 ? 1.0 : -1.0;
    }
    out.s2[i] = sign * (kPi / m2) * proj.dist;
  });
  return out;
}

double pve(const Scores& scores) {
  if (scores.s1.size() < 2) {
    throw std::invalid_argument("pve: need at least 2 observations");
  }
  const double v1 = frechet_circular(scores.s1).variance;
  const double v2 = frechet_circular(scores.s2).variance;
  if (v1 + v2 <= 0.0) {
    throw std::runtime_error("pve: both score variances are zero");
  }
  return v1 / (v1 + v2);
}

namespace {

struct FamilyView {
  double conc1 = 0.0, conc2 = 0.0, dep = 0.0;
};

FamilyView family_view(const ModelParams& params) {
  return std::visit(
      [](const auto& m) -> FamilyView {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BsvmParams>) {
          return {m.kappa1, m.kappa2, m.lambda};
        } else if constexpr (std::is_same_v<T, BwcParams>) {
          return {m.xi1, m.xi2, m.rho};
        } else {
          throw std::invalid_argument("ridge_pca: unexpected BWN fit");
        }
      },
      params);
}

ModelParams zero_centered(const ModelParams& params) {
  return std::visit(
      [](const auto& m) -> ModelParams {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BsvmParams>) {
          return BsvmParams(0.0, 0.0, m.kappa1, m.kappa2, m.lambda);
        } else if constexpr (std::is_same_v<T, BwcParams>) {
          return BwcParams(0.0, 0.0, m.xi1, m.xi2, m.rho);
        } else {
          throw std::invalid_argument("ridge_pca: unexpected BWN fit");
        }
      },
      params);
}

std::string family_name(ModelFamily f) {
  return f == ModelFamily::bsvm ? "bsvm" : "bwc";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// True when consecutive index-coordinate gaps (wrap included) stay within a
// few grid steps, i.e. the chained component spans the whole circle.
bool covers_index_circle(const ConnectedRidge& conn, int grid_n) {
  if (conn.ordered_points.size() < 8) return false;
  std::vector<double> keys;
  keys.reserve(conn.ordered_points.size());
  for (const TorusPoint& p : conn.ordered_points) {
    keys.push_back(conn.index_coord == 1 ? p.theta1.value()
                                         : p.theta2.value());
  }
  std::sort(keys.begin(), keys.end());
  double max_gap = kTwoPi - (keys.back() - keys.front());
  for (std::size_t i = 1; i < keys.size(); ++i) {
    max_gap = std::max(max_gap, keys[i] - keys[i - 1]);
  }
  return max_gap <= 8.0 * kTwoPi / grid_n;
}

// True when the ordered component is a closed curve: no large jump between
// consecutive points, wrap pair included.
bool closes_as_curve(const ConnectedRidge& conn) {
  const std::size_t n = conn.ordered_points.size();
  if (n < 8) return false;
  double worst = torus_dist(conn.ordered_points.front(),
                            conn.ordered_points.back());
  for (std::size_t i = 1; i < n; ++i) {
    worst = std::max(worst, torus_dist(conn.ordered_points[i],
                                       conn.ordered_points[i - 1]));
  }
  return worst <= 0.35;
}

}  // namespace

FourierRidge build_ridge_curve(const ModelParams& params,
                               const RestrictionSet& restrictions,
                               const TrpcaConfig& config, int ambiguous_axis,
                               EdgeFlags* flags,
                               std::map<std::string, std::string>* diag) {
  EdgeFlags local_flags;
  if (!flags) flags = &local_flags;
  auto stage = [&](const std::string& k, const std::string& v) {
    if (diag) (*diag)[k] = v;
  };

  const TorusPoint mu_hat = location(params);
  const FamilyView view = family_view(params);
  const int j_hat = view.conc1 <= view.conc2 ? 1 : 2;
  stage("index_coord", j_hat == 1 ? "1" : "2");

  ConnectedRidge conn;
  if (restrictions.independent && restrictions.homogeneous) {
    conn = explicit_edge_ridge(params, ambiguous_axis == 1
                                           ? EdgeCase::axis_horizontal
                                           : EdgeCase::axis_vertical);
    flags->edge_ridge = true;
    flags->ridge_ambiguous = true;
    stage("ridge_branch", "ambiguous_axis_default");
  } else if (restrictions.independent) {
    conn = explicit_edge_ridge(params, j_hat == 1 ? EdgeCase::axis_horizontal
                                                  : EdgeCase::axis_vertical);
    flags->edge_ridge = true;
    stage("ridge_branch", j_hat == 1 ? "axis_horizontal" : "axis_vertical");
  } else if (restrictions.homogeneous) {
    conn = explicit_edge_ridge(params, view.dep >= 0.0
                                           ? EdgeCase::diagonal_pos
                                           : EdgeCase::diagonal_neg);
    flags->edge_ridge = true;
    stage("ridge_branch", view.dep >= 0.0 ? "diagonal_pos" : "diagonal_neg");
  } else {
    // General case: solve the zero-centered model on the grid, chain the
    // mu-connected component, then shift by mu_hat. Root-detection holes at
    // branch tangencies are crossed by widening the radius; when the curve
    // only closes as a function of the other coordinate (extreme
    // concentration contrast), that index is used instead.
    const ModelParams centered = zero_centered(params);
    const DensityOracle oracle = make_oracle(centered);
    const int dep_sign = view.dep > 0.0 ? 1 : (view.dep < 0.0 ? -1 : 0);
    const double base_delta = 3.0 * kTwoPi / config.grid_n;

    ConnectedRidge best;
    bool have_best = false;
    for (int attempt = 0; attempt < 2 && !have_best; ++attempt) {
      const int index_coord = attempt == 0 ? j_hat : 3 - j_hat;
      RidgeSet rset;
      try {
        rset = ridge_implicit(oracle, index_coord, config.grid_n);
      } catch (const std::exception& e) {
        throw std::runtime_error(
            std::string("ridge_pca: stage (ii)(a) implicit solve failed: ") +
            e.what());
      }
      for (int boosts = 0; boosts <= 4; ++boosts) {
        ConnectedRidge cand;
        try {
          cand = connected_component(rset, TorusPoint(0.0, 0.0), dep_sign,
                                     base_delta * (1 << boosts));
        } catch (const std::exception& e) {
          if (attempt == 1) {
            throw std::runtime_error(
                std::string("ridge_pca: stage (ii)(a) connected component "
                            "failed: ") + e.what());
          }
          break;
        }
        if (covers_index_circle(cand, config.grid_n) &&
            closes_as_curve(cand)) {
          best = cand;
          have_best = true;
          if (boosts > 0) stage("chain_delta_boost", fmt(boosts));
          if (attempt > 0) stage("index_coord_fallback", "1");
          break;
        }
        if (boosts == 4 && attempt == 1) {
          best = cand;  // best effort; downstream may still cope
          have_best = true;
          stage("chain_incomplete", "1");
        }
        if (!have_best && attempt == 0 && boosts == 0) best = cand;
      }
    }
    conn = best;
    conn.mu = mu_hat;
    for (TorusPoint& p : conn.ordered_points) {
      p = TorusPoint(cmod(p.theta1 + mu_hat.theta1),
                     cmod(p.theta2 + mu_hat.theta2));
    }
    stage("ridge_branch", "implicit_general");
    stage("ridge_points", fmt(static_cast<double>(conn.ordered_points.size())));
  }
  flags->extended = conn.extended;

  try {
    return arclength_param(fourier_fit(conn, config.fourier_m));
  } catch (const std::exception& e) {
    throw std::runtime_error(
        std::string("ridge_pca: stage (ii)(b) Fourier fit failed: ") +
        e.what());
  }
}

TrpcaFit ridge_pca(std::span<const TorusPoint> sample,
                   const TrpcaConfig& config) {
  if (sample.size() < 10) {
    throw std::invalid_argument("ridge_pca: need at least 10 points");
  }
  TrpcaFit fit;
  auto stage = [&fit](const std::string& key, const std::string& value) {
    fit.diagnostics[key] = value;
  };

  std::vector<ModelFamily> families;
  if (config.model != TrpcaConfig::Model::bwc) {
    families.push_back(ModelFamily::bsvm);
  }
  if (config.model != TrpcaConfig::Model::bsvm) {
    families.push_back(ModelFamily::bwc);
  }

  // (i)(a) Unrestricted fits; BIC picks the working family.
  std::vector<FitResult> unrestricted;
  for (ModelFamily fam : families) {
    try {
      unrestricted.push_back(fit_mle(sample, fam));
    } catch (const convergence_error& e) {
      throw std::runtime_error("ridge_pca: stage (i)(a) " + family_name(fam) +
                               " fit failed: " + e.what());
    }
  }
  std::size_t sel = 0;
  for (std::size_t i = 1; i < unrestricted.size(); ++i) {
    if (unrestricted[i].bic < unrestricted[sel].bic) sel = i;
  }
  ModelFamily family = unrestricted[sel].family;
  stage("selected_family", family_name(family));
  for (std::size_t i = 0; i < unrestricted.size(); ++i) {
    stage("bic_" + family_name(unrestricted[i].family),
          fmt(unrestricted[i].bic));
  }

  // (i)(b) Edge-case tests on the selected family.
  FitResult fit_ind, fit_hom;
  try {
    fit_ind = fit_mle(sample, family, {.independent = true});
    fit_hom = fit_mle(sample, family, {.homogeneous = true});
  } catch (const convergence_error& e) {
    throw std::runtime_error(std::string("ridge_pca: stage (i)(b) restricted "
                                         "fit failed: ") + e.what());
  }
  fit.lrt_independence = lrt(unrestricted[sel], fit_ind, config.alpha);
  fit.lrt_homogeneity = lrt(unrestricted[sel], fit_hom, config.alpha);
  stage("lrt_independence_stat", fmt(fit.lrt_independence->statistic));
  stage("lrt_homogeneity_stat", fmt(fit.lrt_homogeneity->statistic));

  // (i)(c) Restricted refit on every candidate family, BIC re-applied.
  RestrictionSet restrictions{.homogeneous = !fit.lrt_homogeneity->rejected,
                              .independent = !fit.lrt_independence->rejected};
  std::vector<FitResult> pool = unrestricted;
  if (restrictions.count() > 0) {
    std::vector<FitResult> refits;
    for (ModelFamily fam : families) {
      try {
        refits.push_back(fit_mle(sample, fam, restrictions));
      } catch (const convergence_error& e) {
        throw std::runtime_error(
            std::string("ridge_pca: stage (i)(c) restricted refit failed: ") +
            e.what());
      }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < refits.size(); ++i) {
      if (refits[i].bic < refits[best].bic) best = i;
    }
    for (std::size_t i = 0; i < refits.size(); ++i) {
      stage("bic_restricted_" + family_name(refits[i].family),
            fmt(refits[i].bic));
    }
    fit.selected = refits[best];
    for (std::size_t i = 0; i < refits.size(); ++i) {
      if (i != best) pool.push_back(refits[i]);
    }
    fit.rejected_candidates = pool;
  } else {
    fit.selected = unrestricted[sel];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(sel));
    fit.rejected_candidates = pool;
  }

  // (ii) Ridge computation, with LRT-driven edge cases routed to the
  // explicit representations. When both restrictions hold the ridge
  // direction is undefined; default to the axis of the coordinate with the
  // larger sample circular variance.
  const int ambiguous_axis =
      circular_variance(coord(sample, 1)) >= circular_variance(coord(sample, 2))
          ? 1
          : 2;
  fit.curve = build_ridge_curve(fit.selected.params, restrictions, config,
                                ambiguous_axis, &fit.edge_flags,
                                &fit.diagnostics);

  // (iii) Scores and PVE.
  fit.scores = compute_scores(fit.curve, sample);
  fit.pve = pve(fit.scores);
  stage("pve", fmt(fit.pve));
  return fit;
}

ApcaResult apca(std::span<const TorusPoint> sample) {
  if (sample.size() < 3) {
    throw std::invalid_argument("apca: need at least 3 points");
  }
  const double c1 = circular_mean(coord(sample, 1));
  const double c2 = circular_mean(coord(sample, 2));

  const std::size_t n = sample.size();
  std::vector<double> y1(n), y2(n);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y1[i] = cmod(sample[i].theta1 - c1);
    y2[i] = cmod(sample[i].theta2 - c2);
    m1 += y1[i];
    m2 += y2[i];
  }
  m1 /= static_cast<double>(n);
  m2 /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (y1[i] - m1) * (y1[i] - m1);
    sxy += (y1[i] - m1) * (y2[i] - m2);
    syy += (y2[i] - m2) * (y2[i] - m2);
  }
  sxx /= static_cast<double>(n - 1);
  sxy /= static_cast<double>(n - 1);
  syy /= static_cast<double>(n - 1);

  const double tr = sxx + syy;
  const double disc = std::sqrt((sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy);
  const double l1 = 0.5 * (tr + disc);
  if (!(l1 > 1e-14) || !std::isfinite(l1)) {
    throw std::runtime_error("apca: degenerate covariance");
  }
  Vec2 v1;
  if (std::fabs(sxy) > 1e-300) {
    v1 = {l1 - syy, sxy};
  } else {
    v1 = sxx >= syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  }
  const double nv = std::hypot(v1.x, v1.y);
  v1 = {v1.x / nv, v1.y / nv};
  const Vec2 v2{-v1.y, v1.x};

  ApcaResult out;
  out.first_axis = v1;
  out.s1.resize(n);
  out.s2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.s1[i] = (y1[i] - m1) * v1.x + (y2[i] - m2) * v1.y;
    out.s2[i] = (y1[i] - m1) * v2.x + (y2[i] - m2) * v2.y;
  }

  // PVE through the same Frechet-variance ratio, on wrapped score columns.
  std::vector<double> w1(n), w2(n);
  for (std::size_t i = 0; i < n; ++i) {
    w1[i] = cmod(out.s1[i]);
    w2[i] = cmod(out.s2[i]);
  }
  const double var1 = frechet_circular(w1).variance;
  const double var2 = frechet_circular(w2).variance;
  if (var1 + var2 <= 0.0) {
    throw std::runtime_error("apca: zero total score variance");
  }
  out.pve = var1 / (var1 + var2);
  return out;
}

}  // namespace trpca
