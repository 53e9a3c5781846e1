#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "trpca/models.hpp"
#include "trpca/torus.hpp"

// Maximum-likelihood estimation of the BSvM and BWC models: moment-based
// starting values, derivative-free optimization in unconstrained
// coordinates, BIC, and the homogeneity/independence likelihood ratio
// tests with their restricted refits.

namespace trpca {

enum class ModelFamily { bsvm, bwc };

struct RestrictionSet {
  bool homogeneous = false;  // kappa1 = kappa2 (BSvM) / xi1 = xi2 (BWC)
  bool independent = false;  // lambda = 0 / rho = 0

  int count() const { return (homogeneous ? 1 : 0) + (independent ? 1 : 0); }
  bool operator==(const RestrictionSet&) const = default;
  /// True when *this adds restrictions on top of `base` (superset).
  bool contains(const RestrictionSet& base) const {
    return (homogeneous || !base.homogeneous) &&
           (independent || !base.independent);
  }
};

struct FitResult {
  ModelParams params;
  ModelFamily family = ModelFamily::bsvm;
  double loglik = 0.0;
  double bic = 0.0;
  std::size_t n = 0;
  bool converged = false;
  RestrictionSet restrictions;
};

struct LrtResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool rejected = false;
  double alpha = 0.05;
};

class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& msg, FitResult best)
      : std::runtime_error(msg), best_effort(std::move(best)) {}
  FitResult best_effort;
};

/// Sample log-likelihood under the given parameters.
double loglik(std::span<const TorusPoint> sample, const ModelParams& params);

/// Moment-based starting values: marginal circular means, concentration
/// from the mean resultant length (A^{-1} for BSvM, identity for BWC), and
/// zero / clipped circular correlation for the dependence parameter.
/// Requires n >= 10. Concentrations cap at 500 (kappa) / 0.995 (xi).
ModelParams moment_start(std::span<const TorusPoint> sample,
                         ModelFamily family);

/// Maximum likelihood by Nelder-Mead simplex search in unconstrained
/// coordinates (log kappa, scaled-logit xi, atanh rho, raw wrapped angles),
/// with restrictions enforced by coordinate sharing/pinning. Three runs
/// (moment start plus two perturbed), best kept. Throws convergence_error
/// with the best effort attached when no run converges.
FitResult fit_mle(std::span<const TorusPoint> sample, ModelFamily family,
                  RestrictionSet restrictions = {});

/// Likelihood ratio test of the restricted model (exactly one extra
/// restriction) against the unrestricted one: 2(l - l0) vs chi^2_{alpha;1}.
LrtResult lrt(const FitResult& unrestricted, const FitResult& restricted,
              double alpha = 0.05);

/// Upper-alpha quantile of chi-square with 1 degree of freedom.
double chi2_quantile_1(double alpha);

}  // namespace trpca
