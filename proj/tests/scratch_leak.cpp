// Where do chained components pick up off-branch points? Not a test.
#include <cstdio>

#include "trpca/ridge.hpp"

using namespace trpca;

static void dump_outliers(const char* name, const ModelParams& m, int j,
                          int sign, double (*dev)(const TorusPoint&)) {
  const DensityOracle oracle = make_oracle(m);
  const RidgeSet rs = ridge_implicit(oracle, j, 500);
  const ConnectedRidge conn =
      connected_component(rs, TorusPoint(0, 0), sign, 3.0 * kTwoPi / 500);
  std::printf("%s: conn=%zu\n", name, conn.ordered_points.size());
  int shown = 0;
  for (const auto& p : conn.ordered_points) {
    if (dev(p) > 0.05 && shown < 12) {
      std::printf("  outlier (% .4f, % .4f) dev=%.3f\n", p.theta1.value(),
                  p.theta2.value(), dev(p));
      ++shown;
    }
  }
  // also: points of the raw set near the corner (-pi,-pi)
  std::printf("  raw points within 0.35 of (-pi,-pi):\n");
  shown = 0;
  for (const auto& p : rs.points) {
    if (torus_dist(p, TorusPoint(-kPi, -kPi)) < 0.35 && shown < 14) {
      std::printf("    (% .5f, % .5f)\n", p.theta1.value(), p.theta2.value());
      ++shown;
    }
  }
}

int main() {
  dump_outliers("bsvm 0.3 0.3 1.0", BsvmParams(0, 0, 0.3, 0.3, 1.0), 1, 1,
                [](const TorusPoint& p) {
                  return circ_dist(p.theta2.value(), p.theta1.value());
                });
  dump_outliers("bsvm 1 1 2", BsvmParams(0, 0, 1, 1, 2), 1, 1,
                [](const TorusPoint& p) {
                  return circ_dist(p.theta2.value(), p.theta1.value());
                });
  dump_outliers("bsvm 0.3 0.6 0.5 (dev: none)", BsvmParams(0, 0, 0.3, 0.6, 0.5),
                1, 1, [](const TorusPoint&) { return 0.0; });
  dump_outliers("bwc 0.025 0.6 0.7 (dev: none)",
                BwcParams(0, 0, 0.025, 0.6, 0.7), 1, 1,
                [](const TorusPoint&) { return 0.0; });
  return 0;
}
