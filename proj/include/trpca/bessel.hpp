#pragma once

#include <span>
#include <vector>

// Modified Bessel functions of the first kind, in the exponentially scaled
// form e^{-x} I_m(x) that the sine von Mises normalizing series needs.

namespace trpca {

/// e^{-x} I_m(x) for x >= 0, m >= 0. Ascending power series below x = 15,
/// scaled recurrence (Miller normalization) above.
double bessel_i_scaled(int m, double x);

/// Fills out[k] = e^{-x} I_k(x) for k = 0..out.size()-1 in one downward
/// recurrence pass.
void bessel_i_scaled_all(double x, std::span<double> out);

/// Ratios r_k = I_{k+1}(x) / I_k(x) for k = 0..count-1 (downward ladder).
std::vector<double> bessel_i_ratios(double x, int count);

/// A(kappa) = I_1(kappa) / I_0(kappa), the von Mises mean resultant length.
double bessel_a(double kappa);

/// Inverse of A on [0, kappa_max], by bisection. Values r >= A(kappa_max)
/// clamp to kappa_max.
double bessel_a_inv(double r, double kappa_max = 500.0);

}  // namespace trpca
