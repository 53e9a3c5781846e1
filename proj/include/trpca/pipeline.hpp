#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trpca/curve.hpp"
#include "trpca/fitting.hpp"

// End-to-end TR-PCA: model selection, edge-case routing, ridge curve
// construction, scores, and the proportion of variance explained, plus the
// angular-PCA baseline.

namespace trpca {

struct Scores {
  std::vector<double> s1;  // projection arguments, in T
  std::vector<double> s2;  // signed scaled projection distances, |s2| <= pi
  double m2 = 0.0;         // max projection distance over T^2 (grid approx)
};

/// s1 = projection argument; s2 = (pi/m2) d(theta, proj) signed by the
/// relative position of the tangent and the normal at the projection.
Scores compute_scores(const FourierRidge& curve,
                      std::span<const TorusPoint> sample);

/// PVE = svar1 / (svar1 + svar2), the ratio of marginal Frechet variances
/// of the two score lists.
double pve(const Scores& scores);

struct EdgeFlags {
  bool edge_ridge = false;      // explicit edge-case ridge used
  bool extended = false;        // diagonal extension beyond guaranteed arc
  bool ridge_ambiguous = false; // both LRTs non-rejected; default axis used
  bool frechet_tie = false;     // non-unique Frechet minimizer encountered
};

struct TrpcaConfig {
  enum class Model { auto_select, bsvm, bwc };
  Model model = Model::auto_select;
  double alpha = 0.05;
  int fourier_m = 15;
  int grid_n = 500;
};

struct TrpcaFit {
  FitResult selected;
  std::vector<FitResult> rejected_candidates;
  std::optional<LrtResult> lrt_independence;
  std::optional<LrtResult> lrt_homogeneity;
  EdgeFlags edge_flags;
  FourierRidge curve;
  Scores scores;
  double pve = 0.0;
  std::map<std::string, std::string> diagnostics;
};

/// Stage (ii) of the procedure for an already-selected model: routes the
/// LRT-driven edge cases to the explicit ridges, otherwise solves the
/// zero-centered implicit ridge, chains the mu-connected component
/// (retrying with a widened radius over root-detection holes, and with the
/// other index coordinate when the curve only closes there), shifts by mu,
/// and returns the arc-length Fourier curve. `ambiguous_axis`: 1 or 2 picks
/// the axis used when both restrictions hold.
FourierRidge build_ridge_curve(const ModelParams& params,
                               const RestrictionSet& restrictions,
                               const TrpcaConfig& config,
                               int ambiguous_axis = 1,
                               EdgeFlags* flags = nullptr,
                               std::map<std::string, std::string>* diag =
                                   nullptr);

/// Runs the full three-stage procedure: (i) fit/select/test/refit,
/// (ii) ridge grid + Fourier + arc length, (iii) scores and PVE.
TrpcaFit ridge_pca(std::span<const TorusPoint> sample,
                   const TrpcaConfig& config = {});

struct ApcaResult {
  std::vector<double> s1, s2;  // unbounded: periodicity deliberately ignored
  double pve = 0.0;
  Vec2 first_axis;             // eigenvector of the larger eigenvalue
};

/// Angular PCA baseline: circular-mean centering, cmod wrap, classical 2x2
/// PCA. PVE uses the Frechet variances of the wrapped score columns.
ApcaResult apca(std::span<const TorusPoint> sample);

}  // namespace trpca
