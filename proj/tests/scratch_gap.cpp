// Raw root structure of bwc(0.025,0.6,0.7) in the chain-gap region.
#include <cstdio>

#include "trpca/ridge.hpp"

using namespace trpca;

int main() {
  const ModelParams m = BwcParams(0, 0, 0.025, 0.6, 0.7);
  const RidgeSet rs = ridge_implicit(make_oracle(m), 1, 500);
  std::printf("columns theta1 in [1.5, pi), first-quadrant roots:\n");
  for (const auto& p : rs.points) {
    const double t1 = p.theta1.value(), t2 = p.theta2.value();
    if (t1 >= 1.5 && t2 >= 0.0) std::printf("  (%.5f, %.5f)\n", t1, t2);
  }
  // scan one column densely to see expr structure
  const DensityOracle o = make_oracle(m);
  for (double t1 : {1.7, 2.2, 2.8}) {
    std::printf("column t1=%.2f: expr signs over t2 grid:\n  ", t1);
    int prev_sign = 0;
    for (int jj = 0; jj <= 256; ++jj) {
      const double t2 = -kPi + kTwoPi * jj / 256;
      const DensityDerivatives d = o.evaluate(t1, t2);
      const double e = implicit_expr(d);
      const int s = e > 0 ? 1 : (e < 0 ? -1 : 0);
      if (s != prev_sign) {
        std::printf("[t2=%.3f %c eig=%d] ", t2, s > 0 ? '+' : (s < 0 ? '-' : '0'),
                    (int)eigenvalue_condition(d));
        prev_sign = s;
      }
    }
    std::printf("\n");
  }
  return 0;
}
