// Shape of the bwc(0.025,0.6,0.7) chain around its steep section.
#include <cstdio>

#include "trpca/ridge.hpp"

using namespace trpca;

int main() {
  const ModelParams m = BwcParams(0, 0, 0.025, 0.6, 0.7);
  const RidgeSet rs = ridge_implicit(make_oracle(m), 1, 500);
  const ConnectedRidge conn = connected_component(
      rs, TorusPoint(0, 0), 1, 2.0 * 3.0 * kTwoPi / 500);
  std::printf("conn points: %zu\n", conn.ordered_points.size());
  double prev1 = 0, prev2 = 0;
  bool first = true;
  for (const auto& p : conn.ordered_points) {
    const double t1 = p.theta1.value(), t2 = p.theta2.value();
    if (!first) {
      const double d = torus_dist(p, TorusPoint(prev1, prev2));
      if (d > 0.05) {
        std::printf("gap %.3f: (%.4f, %.4f) -> (%.4f, %.4f)\n", d, prev1,
                    prev2, t1, t2);
      }
    }
    first = false;
    prev1 = t1;
    prev2 = t2;
  }
  // raw roots in columns around the steep zone
  std::printf("raw roots, columns t1 in [1.9, 2.6], all quadrants:\n");
  for (const auto& p : rs.points) {
    const double t1 = p.theta1.value();
    if (t1 > 1.9 && t1 < 2.6) {
      std::printf("  (%.5f, % .5f)\n", t1, p.theta2.value());
    }
  }
  return 0;
}
