#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace chaoslab::quad {

using Integrand = std::function<double(double)>;

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_intervals = 4000;
    /// When false a non-converged result is returned with converged == false.
    bool throw_on_failure = true;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Globally adaptive 21-point Gauss-Kronrod on [a, b]. The interval with the
/// largest error estimate is bisected until the total error estimate meets
/// max(abs_tol, rel_tol * |I|) or hits the roundoff floor of the rule.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Same rule applied over consecutive pieces [p0,p1], [p1,p2], ...; the
/// tolerance is enforced on the sum.
Result integrate_pieces(const Integrand& f, std::span<const double> breakpoints,
                        const Options& opts = {});

/// Integral over [a, inf) through x = a + u / (1 - u).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opts = {});

/// Integral over [s, inf), s > 0, through x = s * exp(u / (1 - u)). Suited to
/// integrands whose mass is spread over many decades above s.
Result integrate_log_tail(const Integrand& f, double s, const Options& opts = {});

/// Integral over (0, inf) through x = pivot * exp(v), split at v = 0 and each
/// half compactified. `pivot` should sit near the bulk of the integrand.
Result integrate_positive_axis(const Integrand& f, double pivot, const Options& opts = {});

}  // namespace chaoslab::quad
