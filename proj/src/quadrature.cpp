#include "chaoslab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "chaoslab/errors.hpp"

namespace chaoslab::quad {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478526, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double abs_value;  // integral of |f|, used for the roundoff floor
    bool operator<(const Segment& o) const { return error < o.error; }
};

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

Segment kronrod21(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::fabs(half);

    const double fc = finite_or_zero(f(center));
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::fabs(resk);
    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};

    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = half * kXgk[jtw];
        const double f1 = finite_or_zero(f(center - dx));
        const double f2 = finite_or_zero(f(center + dx));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = half * kXgk[jtwm1];
        const double f1 = finite_or_zero(f(center - dx));
        const double f2 = finite_or_zero(f(center + dx));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
    }

    const double reskh = resk * 0.5;
    double resasc = kWgk[10] * std::fabs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
    }

    const double result = resk * half;
    resabs *= abs_half;
    resasc *= abs_half;
    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > kTiny / (50.0 * kEps)) {
        err = std::max(kEps * 50.0 * resabs, err);
    }
    return {a, b, result, err, resabs};
}

Result adapt(const Integrand& f, std::vector<Segment> initial, const Options& opts) {
    std::priority_queue<Segment> heap;
    std::vector<Segment> frozen;  // segments too narrow to split further
    double value = 0.0;
    double error = 0.0;
    double abs_value = 0.0;
    for (auto& s : initial) {
        value += s.value;
        error += s.error;
        abs_value += s.abs_value;
        heap.push(s);
    }
    std::size_t evaluations = 21 * initial.size();
    std::size_t intervals = initial.size();

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(value)); };
    auto at_roundoff_floor = [&] { return error <= 50.0 * kEps * abs_value; };

    while (error > tolerance() && !at_roundoff_floor() && !heap.empty() &&
           intervals < opts.max_intervals) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double width = std::fabs(worst.b - worst.a);
        if (width <= 8.0 * kEps * std::max(std::fabs(worst.a), std::fabs(worst.b)) ||
            mid == worst.a || mid == worst.b) {
            frozen.push_back(worst);
            continue;
        }
        const Segment left = kronrod21(f, worst.a, mid);
        const Segment right = kronrod21(f, mid, worst.b);
        evaluations += 42;
        ++intervals;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
    }

    // Resum in positional order: the running sums carry rounding drift and the
    // heap order depends on error ties.
    std::vector<Segment> all = std::move(frozen);
    all.reserve(all.size() + heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    Result out{0.0, 0.0, evaluations, true};
    abs_value = 0.0;
    for (const auto& s : all) {
        out.value += s.value;
        out.abs_error += s.error;
        abs_value += s.abs_value;
    }

    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::fabs(out.value));
    out.converged = out.abs_error <= tol || out.abs_error <= 50.0 * kEps * abs_value ||
                    out.abs_error <= kTiny;
    if (!out.converged && opts.throw_on_failure) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "adaptive quadrature did not converge: estimate " << out.value << ", error "
            << out.abs_error << ", tolerance " << tol << " after " << intervals << " intervals";
        throw QuadratureFailure(msg.str());
    }
    return out;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
    if (a == b) return {};
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate: limits must be finite");
    }
    return adapt(f, {kronrod21(f, a, b)}, opts);
}

Result integrate_pieces(const Integrand& f, std::span<const double> breakpoints, const Options& opts) {
    if (breakpoints.size() < 2) return {};
    std::vector<Segment> initial;
    initial.reserve(breakpoints.size() - 1);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        initial.push_back(kronrod21(f, breakpoints[i], breakpoints[i + 1]));
    }
    if (initial.empty()) return {};
    Options o = opts;
    o.max_intervals = std::max(o.max_intervals, initial.size() * 4);
    return adapt(f, std::move(initial), o);
}

Result integrate_to_infinity(const Integrand& f, double a, const Options& opts) {
    const Integrand g = [&f, a](double u) {
        const double one_minus = 1.0 - u;
        if (one_minus <= 0.0) return 0.0;
        const double x = a + u / one_minus;
        return f(x) / (one_minus * one_minus);
    };
    return integrate(g, 0.0, 1.0, opts);
}

Result integrate_log_tail(const Integrand& f, double s, const Options& opts) {
    if (!(s > 0.0)) throw DomainError("integrate_log_tail: lower limit must be positive");
    const Integrand g = [&f, s](double u) {
        const double one_minus = 1.0 - u;
        if (one_minus <= 0.0) return 0.0;
        const double v = u / one_minus;
        if (v > 700.0) return 0.0;
        const double x = s * std::exp(v);
        if (!std::isfinite(x)) return 0.0;
        return f(x) * x / (one_minus * one_minus);
    };
    return integrate(g, 0.0, 1.0, opts);
}

Result integrate_positive_axis(const Integrand& f, double pivot, const Options& opts) {
    if (!(pivot > 0.0)) throw DomainError("integrate_positive_axis: pivot must be positive");
    // Upper half: x = pivot * exp(v), v in [0, inf). Lower half: x = pivot * exp(-v).
    const Integrand upper = [&f, pivot](double u) {
        const double one_minus = 1.0 - u;
        if (one_minus <= 0.0) return 0.0;
        const double v = u / one_minus;
        if (v > 700.0) return 0.0;
        const double x = pivot * std::exp(v);
        if (!std::isfinite(x)) return 0.0;
        return f(x) * x / (one_minus * one_minus);
    };
    const Integrand lower = [&f, pivot](double u) {
        const double one_minus = 1.0 - u;
        if (one_minus <= 0.0) return 0.0;
        const double v = u / one_minus;
        if (v > 700.0) return 0.0;
        const double x = pivot * std::exp(-v);
        if (!(x > 0.0)) return 0.0;
        return f(x) * x / (one_minus * one_minus);
    };
    // Both halves share one global error budget.
    const Integrand joined = [&](double w) { return w < 1.0 ? lower(1.0 - w) : upper(w - 1.0); };
    const std::array<double, 3> pieces = {0.0, 1.0, 2.0};
    return integrate_pieces(joined, pieces, opts);
}

}  // namespace chaoslab::quad
