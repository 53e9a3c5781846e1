// Which index columns carry multiple chained roots? Not a test.
#include <algorithm>
#include <cstdio>
#include <map>
#include <vector>

#include "trpca/ridge.hpp"

using namespace trpca;

static void dups(const char* name, const ModelParams& m, int j, int sign) {
  const RidgeSet rs = ridge_implicit(make_oracle(m), j, 500);
  const ConnectedRidge conn =
      connected_component(rs, TorusPoint(0, 0), sign, 3.0 * kTwoPi / 500);
  std::map<double, std::vector<double>> cols;
  for (const auto& p : conn.ordered_points) {
    const double key = j == 1 ? p.theta1.value() : p.theta2.value();
    const double val = j == 1 ? p.theta2.value() : p.theta1.value();
    cols[key].push_back(val);
  }
  std::printf("%s: conn=%zu columns=%zu\n", name, conn.ordered_points.size(),
              cols.size());
  for (auto& [k, vs] : cols) {
    if (vs.size() > 1) {
      std::printf("  col % .5f:", k);
      std::sort(vs.begin(), vs.end());
      for (double v : vs) std::printf(" % .5f", v);
      std::printf("\n");
    }
  }
}

int main() {
  dups("bsvm 0.3 0.6 0.5", BsvmParams(0, 0, 0.3, 0.6, 0.5), 1, 1);
  dups("bwc 0.025 0.6 0.7", BwcParams(0, 0, 0.025, 0.6, 0.7), 1, 1);
  dups("bsvm 1.0 0.5 1.5", BsvmParams(0, 0, 1.0, 0.5, 1.5), 2, 1);
  return 0;
}
