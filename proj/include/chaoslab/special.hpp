#pragma once

namespace chaoslab {

/// Modified Bessel function of the third kind, index 1, from
/// K1(z) = 1/2 * int_0^inf exp(-z (y + 1/y) / 2) dy, z > 0.
double bessel_k1(double z);

/// exp(z) * K1(z); finite for all z > 0 where K1 itself underflows.
double bessel_k1_scaled(double z);

/// Standard normal upper tail 1 - Phi(x).
double normal_sf(double x);

double normal_cdf(double x);

}  // namespace chaoslab
