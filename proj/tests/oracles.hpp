#pragma once

// Reference computations for the tests, written without the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// K1(z) = int_0^inf exp(-z cosh t) cosh t dt, trapezoid in t. The integrand is
/// analytic and doubly exponentially decaying, so the rule converges geometrically.
inline double k1(double z) {
    const double h = 1e-3;
    double s = 0.5 * std::exp(-z);
    for (int i = 1;; ++i) {
        const double c = std::cosh(i * h);
        const double term = std::exp(-z * c) * c;
        s += term;
        if (term < 1e-300 || (term < 1e-22 * s && i * h > 1.0)) break;
    }
    return s * h;
}

inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// E|Z|^q for Z ~ N(0, 1).
inline double gaussian_abs_moment(double q) {
    return std::pow(2.0, q / 2.0) * std::tgamma((q + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

inline double ig_cdf(double x, double mu, double lambda) {
    if (x <= 0.0) return 0.0;
    const double r = std::sqrt(lambda / x);
    return normal_cdf(r * (x / mu - 1.0)) + std::exp(2.0 * lambda / mu) * normal_cdf(-r * (x / mu + 1.0));
}

inline double nig_density(double x, double alpha, double delta) {
    const double r = std::sqrt(delta * delta + x * x);
    return alpha * delta * k1(alpha * r) * std::exp(delta * alpha) / (std::numbers::pi * r);
}

/// Symmetric alpha-stable density (scale 1) from the convergent series, alpha < 1.
inline double stable_density_series(double x, double alpha) {
    const double y = std::abs(x);
    double s = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double lg = std::lgamma(k * alpha + 1.0) - std::lgamma(k + 1.0) - (k * alpha + 1.0) * std::log(y);
        const double term = std::exp(lg) * std::sin(k * std::numbers::pi * alpha / 2.0);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (std::exp(lg) < 1e-18 * std::abs(s)) break;
    }
    return s / std::numbers::pi;
}

inline double poisson_pmf(int k, double rate) {
    return std::exp(k * std::log(rate) - rate - std::lgamma(k + 1.0));
}

/// E|N1 - N2| with N1, N2 i.i.d. Poisson(rate).
inline double skellam_abs_mean(double rate) {
    const int kmax = static_cast<int>(rate + 40.0 * std::sqrt(rate + 1.0) + 40.0);
    std::vector<double> p(kmax + 1);
    for (int k = 0; k <= kmax; ++k) p[k] = poisson_pmf(k, rate);
    double s = 0.0;
    for (int i = 0; i <= kmax; ++i) {
        for (int j = 0; j <= kmax; ++j) s += std::abs(i - j) * p[i] * p[j];
    }
    return s;
}

/// Chebyshev polynomial T_d(x) by the three-term recurrence.
inline double chebyshev(int d, double x) {
    double a = 1.0;
    double b = x;
    if (d == 0) return a;
    for (int k = 2; k <= d; ++k) {
        const double c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    return b;
}

/// Kolmogorov-Smirnov statistic of a sample against a continuous cdf.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}

/// KS acceptance threshold at level 0.001.
inline double ks_critical(std::size_t n) { return 1.95 / std::sqrt(static_cast<double>(n)); }

}  // namespace oracle
