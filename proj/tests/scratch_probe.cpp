// Exploratory probe of the pipeline ridge stage on the figure catalogs.
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "trpca/pipeline.hpp"

using namespace trpca;

static void probe(const char* name, const ModelParams& m,
                  RestrictionSet res = {}) {
  std::map<std::string, std::string> diag;
  EdgeFlags flags;
  TrpcaConfig cfg;
  try {
    const FourierRidge fr = build_ridge_curve(m, res, cfg, 1, &flags, &diag);
    std::printf("%-22s R=%7.4f idx=%d%s%s%s", name, fr.total_length_R,
                fr.index_coord, diag.count("chain_delta_boost") ? " boost" : "",
                diag.count("index_coord_fallback") ? " idxswap" : "",
                flags.edge_ridge ? " edge" : "");
    // how well does the fitted curve sit on the true ridge: normalized
    // implicit residual and eigenvalue condition along the curve
    const DensityOracle oracle = make_oracle(m);
    double worst_res = 0.0;
    int eig_fail = 0;
    for (const TorusPoint& p : fr.alpha_cache) {
      const DensityDerivatives d = oracle.evaluate(p.theta1, p.theta2);
      const double sq = std::sqrt((d.w - d.u) * (d.w - d.u) + 4 * d.v * d.v);
      const double scale =
          std::hypot(d.d1, d.d2) *
          std::hypot(2 * d.u - 2 * d.w + 2 * d.v - 2 * sq,
                     d.w - d.u + 4 * d.v - sq);
      worst_res = std::max(
          worst_res, std::fabs(implicit_expr(d)) / std::max(1.0, scale));
      if (!eigenvalue_condition(d)) ++eig_fail;
    }
    std::printf("  curve_res=%.2e eig_fail=%d\n", worst_res, eig_fail);
  } catch (const std::exception& e) {
    std::printf("%-22s FAIL: %s\n", name, e.what());
  }
}

int main() {
  std::printf("--- BSvM catalog (Figure 1) ---\n");
  probe("bsvm 0.3 0.15 0.25", BsvmParams(0, 0, 0.3, 0.15, 0.25));
  probe("bsvm 0.3 0.6 0.5", BsvmParams(0, 0, 0.3, 0.6, 0.5));
  probe("bsvm 0.3 0.3 1.0", BsvmParams(0, 0, 0.3, 0.3, 1.0),
        {.homogeneous = true});
  probe("bsvm 1.0 0.5 1.5", BsvmParams(0, 0, 1.0, 0.5, 1.5));
  std::printf("--- BWC catalog (Figure 4) ---\n");
  probe("bwc 0.15 0.075 0.25", BwcParams(0, 0, 0.15, 0.075, 0.25));
  probe("bwc 0.2 0.7 0.2", BwcParams(0, 0, 0.2, 0.7, 0.2));
  probe("bwc 0.3 0.3 0.6", BwcParams(0, 0, 0.3, 0.3, 0.6),
        {.homogeneous = true});
  probe("bwc 0.025 0.6 0.7", BwcParams(0, 0, 0.025, 0.6, 0.7));
  return 0;
}
