#include "chaoslab/special.hpp"

#include <cmath>
#include <numbers>

#include "chaoslab/errors.hpp"
#include "chaoslab/quadrature.hpp"

namespace chaoslab {

double bessel_k1_scaled(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw DomainError("bessel_k1: argument must be positive and finite");
    }
    // exp(z) * integrand, with (y + 1/y)/2 - 1 written as (y - 1)^2 / (2y).
    const quad::Integrand integrand = [z](double y) {
        if (!(y > 0.0)) return 0.0;
        const double d = y - 1.0;
        return std::exp(-z * d * d / (2.0 * y));
    };
    quad::Options opts;
    opts.rel_tol = 1e-12;
    // The integrand peaks at y = 1; each side is integrated separately.
    const double left = quad::integrate(integrand, 0.0, 1.0, opts).value;
    const double right = quad::integrate_to_infinity(integrand, 1.0, opts).value;
    return 0.5 * (left + right);
}

double bessel_k1(double z) { return bessel_k1_scaled(z) * std::exp(-z); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace chaoslab
