// The bwc(0.025,0.6,0.7) seam fold, viewed along theta2 columns.
#include <cstdio>

#include "trpca/ridge.hpp"

using namespace trpca;

int main() {
  const ModelParams m = BwcParams(0, 0, 0.025, 0.6, 0.7);
  const RidgeSet rs2 = ridge_implicit(make_oracle(m), 2, 500);
  std::printf("index=theta2 columns in [2.2, pi], roots (theta1, theta2):\n");
  for (const auto& p : rs2.points) {
    const double t2 = p.theta2.value();
    if (t2 >= 2.2 && p.theta1.value() > 0) {
      std::printf("  (% .5f, %.5f)\n", p.theta1.value(), t2);
    }
  }
  return 0;
}
