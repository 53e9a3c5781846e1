#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "trpca/models.hpp"
#include "trpca/torus.hpp"

// Density-ridge computation for bivariate C^2 densities: the closed-form
// 2x2 Hessian eigensystem, the implicit ridge equation with its eigenvalue
// condition, grid/bisection and Euler integral-curve solvers, extraction of
// the mu-connected component, and the explicit edge-case ridges.

namespace trpca {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class DomainKind { periodic, planar };

/// A bivariate density with derivative components, evaluated on raw
/// coordinates so planar (non-wrapping) domains are expressible too.
struct DensityOracle {
  std::function<DensityDerivatives(double t1, double t2)> evaluate;
  DomainKind domain = DomainKind::periodic;
  // Bounding box, used only for planar domains.
  double x_lo = -kPi, x_hi = kPi, y_lo = -kPi, y_hi = kPi;
};

/// Oracle for a BSvM or BWC model (BWN is rejected: its ridges are out of
/// scope).
DensityOracle make_oracle(const ModelParams& params);

struct HessianEig {
  double lambda1 = 0.0;  // lambda1 >= lambda2
  double lambda2 = 0.0;
  Vec2 u1, u2;           // unit eigenvectors, u1 for lambda1
  bool degenerate = false;  // isotropic Hessian; u2 closed form vanishes
};

/// Closed-form eigensystem of [[u, v], [v, w]].
HessianEig hessian_eig2(double u, double v, double w);

/// Left-hand side of the implicit ridge equation,
/// D1 (2u - 2w + 2v - 2 s) + D2 (w - u + 4v - s), s = sqrt((w-u)^2 + 4 v^2).
/// Zero exactly when the gradient is orthogonal to u2.
double implicit_expr(const DensityDerivatives& d);

/// Eigenvalue condition lambda2(u, v, w) < 0.
bool eigenvalue_condition(const DensityDerivatives& d);

enum class RidgeMethod { implicit_eq, euler, explicit_edge };

struct RidgeSet {
  std::vector<TorusPoint> points;
  /// Scale-normalized implicit-expression magnitude at each point:
  /// |expr| / max(1, |grad| * |u2_raw|).
  std::vector<double> residuals;
  RidgeMethod method = RidgeMethod::implicit_eq;
  int index_coord = 1;
  std::size_t dropped = 0;  // euler: starts that failed to converge
};

/// Solves the implicit equation along grid_n columns of the index
/// coordinate, bisecting every sign change of the expression over a grid_n
/// scan of the other coordinate. Roots must pass the eigenvalue condition
/// and not be Hessian-degenerate.
RidgeSet ridge_implicit(const DensityOracle& oracle, int index_coord,
                        int grid_n = 500, double tol = 1e-10);

/// Euler iteration x <- x + h * eta with the normalized projected gradient
/// eta = u2 u2' grad f / f, run from each start until |eta| < conv_tol.
/// Throws when no start converges.
RidgeSet ridge_euler(const DensityOracle& oracle,
                     const std::vector<Vec2>& starts, double h = 0.2,
                     double conv_tol = 1e-5, int max_iter = 10000);

/// Uniform per_axis x per_axis grid of starts over the oracle's domain.
std::vector<Vec2> grid_starts(const DensityOracle& oracle, int per_axis);

struct ConnectedRidge {
  /// Starts at mu, then follows the index coordinate around the circle.
  std::vector<TorusPoint> ordered_points;
  TorusPoint mu;
  int quadrant_sign = 0;  // -1, 0, +1
  int index_coord = 1;
  bool extended = false;  // diagonal imposed beyond the guaranteed arc
};

/// Greedy chaining of ridge points from mu in both directions, with the
/// candidate pool pre-filtered by the quadrant rule when dependence_sign is
/// nonzero. Throws when mu is not within delta of any ridge point.
ConnectedRidge connected_component(const RidgeSet& ridge, TorusPoint mu,
                                   int dependence_sign, double delta);

enum class EdgeCase { axis_horizontal, axis_vertical, diagonal_pos,
                      diagonal_neg };

/// Exact line ridges of the BSvM/BWC limit cases, sampled on a uniform
/// 512-point grid. Diagonal cases use the full diagonal; `extended` is set
/// when that goes beyond the arc the eigenvalue condition guarantees.
ConnectedRidge explicit_edge_ridge(const ModelParams& params, EdgeCase which);

}  // namespace trpca
