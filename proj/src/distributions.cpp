#include "chaoslab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "chaoslab/errors.hpp"
#include "chaoslab/quadrature.hpp"
#include "chaoslab/special.hpp"

namespace chaoslab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

bool is_cauchy_nig(const SymmetricNIG& n) { return n.alpha == 0.0 && n.delta > 0.0; }
bool is_degenerate_nig(const SymmetricNIG& n) { return n.delta == 0.0; }

// --- symmetric stable helpers (unit scale) ---------------------------------------

/// Upper limit where exp(-t^alpha) drops below 1e-18.
double stable_cutoff(double alpha) { return std::pow(41.5, 1.0 / alpha); }

/// Tail series coefficients: density ~ (1/pi) sum_k c_k |y|^{-k alpha - 1}.
double stable_series_density(double alpha, double y, int terms) {
    double sum = 0.0;
    for (int k = 1; k <= terms; ++k) {
        const double size = std::exp(std::lgamma(k * alpha + 1.0) - std::lgamma(k + 1.0)) *
                            std::pow(y, -k * alpha - 1.0);
        sum += ((k % 2 == 1) ? 1.0 : -1.0) * std::sin(k * kPi * alpha / 2.0) * size;
        if (size < 1e-17 * std::fabs(sum)) break;
    }
    return sum / kPi;
}

double stable_series_tail(double alpha, double y, int terms) {
    double sum = 0.0;
    for (int k = 1; k <= terms; ++k) {
        const double size = std::exp(std::lgamma(k * alpha) - std::lgamma(k + 1.0)) * std::pow(y, -k * alpha);
        sum += ((k % 2 == 1) ? 1.0 : -1.0) * std::sin(k * kPi * alpha / 2.0) * size;
        if (size < 1e-17 * std::fabs(sum)) break;
    }
    return sum / kPi;
}

/// Fourier pieces over [0, T] no wider than a quarter period of cos(t y).
std::vector<double> fourier_breaks(double alpha, double y) {
    const double T = stable_cutoff(alpha);
    const double width = std::min(T, 0.5 * kPi / std::max(std::fabs(y), 1e-300));
    const std::size_t n = std::min<std::size_t>(20000, static_cast<std::size_t>(std::ceil(T / width)));
    std::vector<double> b(n + 1);
    for (std::size_t i = 0; i <= n; ++i) b[i] = T * static_cast<double>(i) / static_cast<double>(n);
    return b;
}

double stable_unit_density(double alpha, double y) {
    y = std::fabs(y);
    if (y > 100.0 || (alpha < 1.0 && y > 4.0)) return stable_series_density(alpha, y, 60);
    const auto breaks = fourier_breaks(alpha, y);
    quad::Options o;
    o.rel_tol = 1e-10;
    o.abs_tol = 1e-14;
    o.max_intervals = 4 * breaks.size() + 4000;
    o.throw_on_failure = false;
    const auto r = quad::integrate_pieces(
        [alpha, y](double t) { return std::cos(t * y) * std::exp(-std::pow(t, alpha)); }, breaks, o);
    return r.value / kPi;
}

/// P(Y > y) for a unit symmetric stable Y, y >= 0.
double stable_unit_upper_tail(double alpha, double y) {
    if (y > 100.0 || (alpha < 1.0 && y > 4.0)) return stable_series_tail(alpha, y, 60);
    if (y == 0.0) return 0.5;
    const auto breaks = fourier_breaks(alpha, y);
    quad::Options o;
    o.rel_tol = 1e-10;
    o.abs_tol = 1e-14;
    o.max_intervals = 4 * breaks.size() + 4000;
    o.throw_on_failure = false;
    const auto r = quad::integrate_pieces(
        [alpha, y](double t) {
            if (t == 0.0) return y;
            return std::sin(t * y) / t * std::exp(-std::pow(t, alpha));
        },
        breaks, o);
    return 0.5 - r.value / kPi;
}

/// Sorted |Y| draws of a unit symmetric stable law, shared per alpha.
constexpr std::size_t kStableDraws = 1000000;
constexpr std::uint64_t kStableSeed = 0x57AB1E5EEDULL;

double draw_stable_unit(double alpha, Engine& e, std::uniform_real_distribution<double>& unit,
                        std::exponential_distribution<double>& expo) {
    const double v = kPi * (unit(e) - 0.5);
    if (alpha == 1.0) return std::tan(v);
    double w = expo(e);
    while (w == 0.0) w = expo(e);
    const double a = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
    const double b = std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
    return a * b;
}

std::shared_ptr<const std::vector<double>> stable_abs_sample(double alpha) {
    static std::mutex mutex;
    static std::map<double, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(alpha); it != cache.end()) return it->second;
    auto draws = sample(DistributionSpec(SymmetricStable{alpha, 1.0}), kStableSeed, kStableDraws);
    for (auto& d : draws) d = std::fabs(d);
    std::sort(draws.begin(), draws.end());
    auto ptr = std::make_shared<const std::vector<double>>(std::move(draws));
    cache.emplace(alpha, ptr);
    return ptr;
}

/// Index of the first sorted draw above (closed: at or above) y.
std::size_t first_index_above(const std::vector<double>& sorted, double y, bool closed) {
    const auto it = closed ? std::lower_bound(sorted.begin(), sorted.end(), y)
                           : std::upper_bound(sorted.begin(), sorted.end(), y);
    return static_cast<std::size_t>(it - sorted.begin());
}

// --- Poisson ------------------------------------------------------------------------

double poisson_log_pmf(double rate, double k) { return k * std::log(rate) - rate - std::lgamma(k + 1.0); }

/// sum_{k >= k0} k^q p_k (q = 0 gives the tail mass).
double poisson_upper_sum(double rate, double k0, double q) {
    k0 = std::max(0.0, k0);
    double sum = 0.0;
    const double stop_after = rate + 40.0 * std::sqrt(rate) + 50.0;
    for (double k = k0;; k += 1.0) {
        const double term = std::exp(poisson_log_pmf(rate, k) + (q == 0.0 || k == 0.0 ? 0.0 : q * std::log(k))) *
                            (k == 0.0 && q > 0.0 ? 0.0 : 1.0);
        sum += term;
        if (k > stop_after && term <= 1e-18 * sum) break;
        if (k > rate && term == 0.0) break;
    }
    return sum;
}

// --- continuous region integrals ----------------------------------------------------

struct SideRange {
    double start;  // in |x|
    double end;    // in |x|, may be +inf
    double sign;   // x = sign * |x|
};

std::vector<SideRange> abs_region(const DistributionSpec& spec, double s) {
    const Support sup = spec.support();
    std::vector<SideRange> sides;
    {
        const double start = std::max(s, sup.lower);
        if (sup.upper > start) sides.push_back({start, sup.upper, 1.0});
    }
    if (!spec.symmetric()) {
        const double start = std::max(s, -sup.upper);
        if (-sup.lower > start) sides.push_back({start, -sup.lower, -1.0});
    }
    return sides;
}

/// Log-density maximum over probe points of the region, used as a rescaling
/// constant so that region integrals never underflow.
double region_log_scale(const DistributionSpec& spec, const std::vector<SideRange>& sides) {
    double best = -kInf;
    const double hint = spec.scale_hint();
    for (const auto& side : sides) {
        for (int j = 0; j <= 80; ++j) {
            double y;
            if (std::isfinite(side.end)) {
                y = side.start + (side.end - side.start) * (j + 0.5) / 81.0;
            } else if (side.start > 0.0) {
                y = side.start * std::exp(0.5 * j);
            } else {
                y = hint * std::exp(0.5 * (j - 40));
            }
            const double v = log_density(spec, side.sign * y);
            if (std::isfinite(v)) best = std::max(best, v);
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

/// int_{region} weight(|x|) exp(log f(x) - log_scale) dx.
double region_integral(const DistributionSpec& spec, const std::vector<SideRange>& sides, double log_scale,
                       const std::function<double(double)>& weight) {
    quad::Options opts;
    opts.rel_tol = 1e-10;
    double total = 0.0;
    for (const auto& side : sides) {
        const quad::Integrand g = [&](double y) {
            const double w = weight(y);
            if (w == 0.0) return 0.0;
            const double lf = log_density(spec, side.sign * y);
            if (!std::isfinite(lf)) return 0.0;
            return w * std::exp(lf - log_scale);
        };
        double part;
        if (std::isfinite(side.end)) {
            part = quad::integrate(g, side.start, side.end, opts).value;
        } else if (side.start > 0.0) {
            part = quad::integrate_log_tail(g, side.start, opts).value;
        } else {
            part = quad::integrate_positive_axis(g, spec.scale_hint(), opts).value;
        }
        total += spec.symmetric() ? 2.0 * part : part;
    }
    return total;
}

/// int_0^x f(t) dt for x > 0 through t = x * exp(-v).
double integrate_from_zero(const quad::Integrand& f, double x) {
    quad::Options o;
    o.rel_tol = 1e-10;
    return quad::integrate_to_infinity(
               [&f, x](double v) {
                   if (v > 700.0) return 0.0;
                   const double t = x * std::exp(-v);
                   return t > 0.0 ? f(t) * t : 0.0;
               },
               0.0, o)
        .value;
}

}  // namespace

// --- DistributionSpec ---------------------------------------------------------------

DistributionSpec::DistributionSpec(Family family) : family_(std::move(family)) {
    std::visit(overloaded{
                   [](const Gaussian& g) {
                       require(std::isfinite(g.mean), "gaussian: mean must be finite");
                       require(positive_finite(g.variance), "gaussian: variance must be positive");
                   },
                   [](const Rademacher&) {},
                   [](const Poisson& p) { require(positive_finite(p.rate), "poisson: rate must be positive"); },
                   [](const GammaLaw& g) {
                       require(positive_finite(g.shape), "gamma: shape must be positive");
                       require(positive_finite(g.rate), "gamma: rate must be positive");
                   },
                   [](const Exponential& e) {
                       require(positive_finite(e.rate), "exponential: rate must be positive");
                   },
                   [](const SymmetricStable& s) {
                       require(s.alpha > 0.0 && s.alpha <= 2.0, "symmetric_stable: alpha must lie in (0, 2]");
                       require(positive_finite(s.scale), "symmetric_stable: scale must be positive");
                   },
                   [](const InverseGaussian& ig) {
                       require(positive_finite(ig.mu), "inverse_gaussian: mu must be positive");
                       require(positive_finite(ig.lambda), "inverse_gaussian: lambda must be positive");
                   },
                   [](const SymmetricNIG& n) {
                       require(n.alpha >= 0.0 && std::isfinite(n.alpha), "symmetric_nig: alpha must be >= 0");
                       require(n.delta >= 0.0 && std::isfinite(n.delta), "symmetric_nig: delta must be >= 0");
                   },
                   [](const PointMass& p) { require(std::isfinite(p.value), "point_mass: value must be finite"); },
                   [](const Uniform& u) {
                       require(std::isfinite(u.a) && std::isfinite(u.b) && u.a < u.b,
                               "uniform: need finite a < b");
                   },
                   [](const Pareto& p) {
                       require(positive_finite(p.alpha), "pareto: alpha must be positive");
                       require(positive_finite(p.scale), "pareto: scale must be positive");
                   },
               },
               family_);
}

std::string_view DistributionSpec::name() const {
    return std::visit(overloaded{
                          [](const Gaussian&) { return std::string_view("gaussian"); },
                          [](const Rademacher&) { return std::string_view("rademacher"); },
                          [](const Poisson&) { return std::string_view("poisson"); },
                          [](const GammaLaw&) { return std::string_view("gamma"); },
                          [](const Exponential&) { return std::string_view("exponential"); },
                          [](const SymmetricStable&) { return std::string_view("symmetric_stable"); },
                          [](const InverseGaussian&) { return std::string_view("inverse_gaussian"); },
                          [](const SymmetricNIG&) { return std::string_view("symmetric_nig"); },
                          [](const PointMass&) { return std::string_view("point_mass"); },
                          [](const Uniform&) { return std::string_view("uniform"); },
                          [](const Pareto&) { return std::string_view("pareto"); },
                      },
                      family_);
}

bool DistributionSpec::symmetric() const {
    return std::visit(overloaded{
                          [](const Gaussian& g) { return g.mean == 0.0; },
                          [](const Rademacher&) { return true; },
                          [](const SymmetricStable&) { return true; },
                          [](const SymmetricNIG&) { return true; },
                          [](const PointMass& p) { return p.value == 0.0; },
                          [](const Uniform& u) { return u.a == -u.b; },
                          [](const auto&) { return false; },
                      },
                      family_);
}

bool DistributionSpec::continuous() const {
    return std::visit(overloaded{
                          [](const Rademacher&) { return false; },
                          [](const Poisson&) { return false; },
                          [](const PointMass&) { return false; },
                          [](const SymmetricNIG& n) { return !is_degenerate_nig(n); },
                          [](const auto&) { return true; },
                      },
                      family_);
}

bool DistributionSpec::monte_carlo_tails() const {
    if (const auto* s = std::get_if<SymmetricStable>(&family_)) return s->alpha != 1.0 && s->alpha != 2.0;
    return false;
}

Support DistributionSpec::support() const {
    return std::visit(overloaded{
                          [](const Rademacher&) { return Support{-1.0, 1.0}; },
                          [](const Poisson&) { return Support{0.0, kInf}; },
                          [](const GammaLaw&) { return Support{0.0, kInf}; },
                          [](const Exponential&) { return Support{0.0, kInf}; },
                          [](const InverseGaussian&) { return Support{0.0, kInf}; },
                          [](const SymmetricNIG& n) {
                              return is_degenerate_nig(n) ? Support{0.0, 0.0} : Support{};
                          },
                          [](const PointMass& p) { return Support{p.value, p.value}; },
                          [](const Uniform& u) { return Support{u.a, u.b}; },
                          [](const Pareto& p) { return Support{p.scale, kInf}; },
                          [](const auto&) { return Support{}; },
                      },
                      family_);
}

double DistributionSpec::scale_hint() const {
    return std::visit(overloaded{
                          [](const Gaussian& g) { return std::max(std::fabs(g.mean), std::sqrt(g.variance)); },
                          [](const Rademacher&) { return 1.0; },
                          [](const Poisson& p) { return std::max(1.0, p.rate); },
                          [](const GammaLaw& g) { return std::max(g.shape, 1e-300) / g.rate; },
                          [](const Exponential& e) { return 1.0 / e.rate; },
                          [](const SymmetricStable& s) { return s.scale; },
                          [](const InverseGaussian& ig) { return std::min(ig.mu, ig.lambda); },
                          [](const SymmetricNIG& n) {
                              if (n.delta == 0.0) return 1.0;
                              return n.alpha > 0.0 ? std::min(n.delta, std::sqrt(n.delta / n.alpha)) : n.delta;
                          },
                          [](const PointMass& p) { return p.value != 0.0 ? std::fabs(p.value) : 1.0; },
                          [](const Uniform& u) { return std::max(std::fabs(u.a), std::fabs(u.b)); },
                          [](const Pareto& p) { return p.scale; },
                      },
                      family_);
}

bool operator==(const DistributionSpec& a, const DistributionSpec& b) { return describe(a) == describe(b); }

std::string describe(const DistributionSpec& spec) {
    std::ostringstream out;
    out.precision(17);
    out << spec.name() << '(';
    std::visit(overloaded{
                   [&](const Gaussian& g) { out << "mean=" << g.mean << ", variance=" << g.variance; },
                   [&](const Rademacher&) {},
                   [&](const Poisson& p) { out << "rate=" << p.rate; },
                   [&](const GammaLaw& g) { out << "shape=" << g.shape << ", rate=" << g.rate; },
                   [&](const Exponential& e) { out << "rate=" << e.rate; },
                   [&](const SymmetricStable& s) { out << "alpha=" << s.alpha << ", scale=" << s.scale; },
                   [&](const InverseGaussian& ig) { out << "mu=" << ig.mu << ", lambda=" << ig.lambda; },
                   [&](const SymmetricNIG& n) { out << "alpha=" << n.alpha << ", delta=" << n.delta; },
                   [&](const PointMass& p) { out << "value=" << p.value; },
                   [&](const Uniform& u) { out << "a=" << u.a << ", b=" << u.b; },
                   [&](const Pareto& p) { out << "alpha=" << p.alpha << ", scale=" << p.scale; },
               },
               spec.family());
    out << ')';
    return out.str();
}

// --- densities ------------------------------------------------------------------------

double log_density(const DistributionSpec& spec, double x) {
    if (!spec.continuous()) {
        throw DiscreteFamily("density: " + std::string(spec.name()) + " has no Lebesgue density");
    }
    return std::visit(
        overloaded{
            [x](const Gaussian& g) {
                const double d = x - g.mean;
                return -0.5 * std::log(2.0 * kPi * g.variance) - d * d / (2.0 * g.variance);
            },
            [x](const GammaLaw& g) {
                if (x < 0.0) return -kInf;
                if (x == 0.0) {
                    if (g.shape < 1.0) return kInf;
                    return g.shape == 1.0 ? std::log(g.rate) : -kInf;
                }
                return (g.shape - 1.0) * std::log(x) + g.shape * std::log(g.rate) - g.rate * x -
                       std::lgamma(g.shape);
            },
            [x](const Exponential& e) { return x < 0.0 ? -kInf : std::log(e.rate) - e.rate * x; },
            [x](const SymmetricStable& s) {
                if (s.alpha == 2.0) {
                    const double var = 2.0 * s.scale * s.scale;
                    return -0.5 * std::log(2.0 * kPi * var) - x * x / (2.0 * var);
                }
                const double h = std::hypot(1.0, x / s.scale);
                if (s.alpha == 1.0) return -std::log(kPi * s.scale) - 2.0 * std::log(h);
                const double f = stable_unit_density(s.alpha, x / s.scale) / s.scale;
                return f > 0.0 ? std::log(f) : -kInf;
            },
            [x](const InverseGaussian& ig) {
                if (x <= 0.0) return -kInf;
                const double d = x - ig.mu;
                return 0.5 * std::log(ig.lambda / (2.0 * kPi * x * x * x)) -
                       ig.lambda * d * d / (2.0 * ig.mu * ig.mu * x);
            },
            [x](const SymmetricNIG& n) {
                const double h = std::hypot(1.0, x / n.delta);
                if (n.alpha == 0.0) return -std::log(kPi * n.delta) - 2.0 * std::log(h);
                const double z = n.delta * n.alpha * h;
                return std::log(n.alpha / kPi) + n.delta * n.alpha - std::log(h) + std::log(bessel_k1_scaled(z)) - z;
            },
            [x](const Uniform& u) { return (x >= u.a && x <= u.b) ? -std::log(u.b - u.a) : -kInf; },
            [x](const Pareto& p) {
                if (x < p.scale) return -kInf;
                return std::log(p.alpha) + p.alpha * std::log(p.scale) - (p.alpha + 1.0) * std::log(x);
            },
            [](const auto&) -> double { throw DiscreteFamily("density: no Lebesgue density"); },
        },
        spec.family());
}

double density(const DistributionSpec& spec, double x) {
    if (const auto* s = std::get_if<SymmetricStable>(&spec.family());
        s != nullptr && s->alpha != 1.0 && s->alpha != 2.0) {
        return std::max(0.0, stable_unit_density(s->alpha, x / s->scale) / s->scale);
    }
    return std::exp(log_density(spec, x));
}

double cdf(const DistributionSpec& spec, double x) {
    if (!spec.continuous()) {
        // Discrete laws: P(Z <= x) from the atoms.
        return std::visit(overloaded{
                              [x](const Rademacher&) { return x < -1.0 ? 0.0 : (x < 1.0 ? 0.5 : 1.0); },
                              [x](const PointMass& p) { return x < p.value ? 0.0 : 1.0; },
                              [x](const SymmetricNIG&) { return x < 0.0 ? 0.0 : 1.0; },
                              [x](const Poisson& p) {
                                  if (x < 0.0) return 0.0;
                                  return 1.0 - poisson_upper_sum(p.rate, std::floor(x) + 1.0, 0.0);
                              },
                              [](const auto&) { return kNaN; },
                          },
                          spec.family());
    }
    if (const auto* s = std::get_if<SymmetricStable>(&spec.family());
        s != nullptr && s->alpha != 1.0 && s->alpha != 2.0) {
        const double y = x / s->scale;
        const double upper = stable_unit_upper_tail(s->alpha, std::fabs(y));
        return y >= 0.0 ? 1.0 - upper : upper;
    }
    const Support sup = spec.support();
    if (x <= sup.lower) return 0.0;
    if (x >= sup.upper) return 1.0;
    const quad::Integrand f = [&spec](double t) { return density(spec, t); };
    quad::Options o;
    o.rel_tol = 1e-10;
    const double hint = spec.scale_hint();

    double left;
    if (sup.lower == 0.0) {
        left = integrate_from_zero(f, x);
    } else if (std::isfinite(sup.lower)) {
        left = quad::integrate(f, sup.lower, x, o).value;
    } else {
        left = quad::integrate_positive_axis([&f, x](double y) { return f(x - y); }, hint, o).value;
    }
    double right;
    if (std::isfinite(sup.upper)) {
        right = quad::integrate(f, x, sup.upper, o).value;
    } else if (x > 0.0) {
        right = quad::integrate_log_tail(f, x, o).value;
    } else {
        right = quad::integrate_positive_axis([&f, x](double y) { return f(x + y); }, hint, o).value;
    }
    const double total = left + right;
    return total > 0.0 ? left / total : kNaN;
}

// --- tails and moments -----------------------------------------------------------------

bool moment_exists(const DistributionSpec& spec, double q) {
    return std::visit(overloaded{
                          [q](const SymmetricStable& s) { return s.alpha == 2.0 || q < s.alpha; },
                          [q](const SymmetricNIG& n) { return !is_cauchy_nig(n) || q < 1.0; },
                          [q](const Pareto& p) { return q < p.alpha; },
                          [](const auto&) { return true; },
                      },
                      spec.family());
}

namespace {

double discrete_region_moment(const DistributionSpec& spec, double q, double s, bool closed) {
    auto hit = [s, closed](double a) { return closed ? a >= s : a > s; };
    return std::visit(overloaded{
                          [&](const Rademacher&) { return hit(1.0) ? 1.0 : 0.0; },
                          [&](const PointMass& p) {
                              const double a = std::fabs(p.value);
                              return hit(a) ? (q == 0.0 ? 1.0 : std::pow(a, q)) : 0.0;
                          },
                          [&](const SymmetricNIG&) { return hit(0.0) ? (q == 0.0 ? 1.0 : 0.0) : 0.0; },
                          [&](const Poisson& p) {
                              const double k0 = closed ? std::ceil(s) : std::floor(s) + 1.0;
                              return poisson_upper_sum(p.rate, k0, q);
                          },
                          [](const auto&) { return kNaN; },
                      },
                      spec.family());
}

struct McView {
    std::shared_ptr<const std::vector<double>> sorted;
    double scale;
};

McView mc_view(const DistributionSpec& spec) {
    const auto& st = std::get<SymmetricStable>(spec.family());
    return {stable_abs_sample(st.alpha), st.scale};
}

}  // namespace

double tail_prob(const DistributionSpec& spec, double s) {
    if (!(s >= 0.0)) throw DomainError("tail_prob: s must be >= 0");
    if (!spec.continuous()) return discrete_region_moment(spec, 0.0, s, false);
    if (s == 0.0) return 1.0;
    if (spec.monte_carlo_tails()) {
        const auto& st = std::get<SymmetricStable>(spec.family());
        return std::clamp(2.0 * stable_unit_upper_tail(st.alpha, s / st.scale), 0.0, 1.0);
    }
    const auto sides = abs_region(spec, s);
    if (sides.empty()) return 0.0;
    const double log_scale = region_log_scale(spec, sides);
    const double scaled = region_integral(spec, sides, log_scale, [](double) { return 1.0; });
    return std::min(1.0, std::exp(log_scale) * scaled);
}

double tail_prob_closed(const DistributionSpec& spec, double s) {
    if (!(s >= 0.0)) throw DomainError("tail_prob: s must be >= 0");
    if (!spec.continuous()) return discrete_region_moment(spec, 0.0, s, true);
    return tail_prob(spec, s);
}

double truncated_moment(const DistributionSpec& spec, double q, double s) {
    if (!(q > 0.0)) throw DomainError("truncated_moment: q must be positive");
    if (!(s >= 0.0)) throw DomainError("truncated_moment: s must be >= 0");
    if (!moment_exists(spec, q)) {
        std::ostringstream msg;
        msg << "E|Z|^" << q << " is infinite for " << describe(spec);
        throw MomentDoesNotExist(msg.str());
    }
    if (!spec.continuous()) return discrete_region_moment(spec, q, s, false);
    if (spec.monte_carlo_tails()) {
        const auto view = mc_view(spec);
        const auto& v = *view.sorted;
        double sum = 0.0;
        for (std::size_t i = first_index_above(v, s / view.scale, false); i < v.size(); ++i) {
            sum += std::pow(v[i] * view.scale, q);
        }
        return sum / static_cast<double>(v.size());
    }
    const auto sides = abs_region(spec, s);
    if (sides.empty()) return 0.0;
    const double log_scale = region_log_scale(spec, sides);
    const double scaled = region_integral(spec, sides, log_scale, [q](double y) { return std::pow(y, q); });
    return std::exp(log_scale) * scaled;
}

double abs_moment(const DistributionSpec& spec, double q) { return truncated_moment(spec, q, 0.0); }

TailSummary tail_summary(const DistributionSpec& spec, double q, double s, bool closed) {
    if (!(q > 0.0)) throw DomainError("tail_moment_ratio: q must be positive");
    if (!(s > 0.0)) throw DomainError("tail_moment_ratio: s must be positive");
    if (!moment_exists(spec, q)) {
        std::ostringstream msg;
        msg << "E|Z|^" << q << " is infinite for " << describe(spec);
        throw MomentDoesNotExist(msg.str());
    }
    TailSummary out;
    if (!spec.continuous()) {
        out.tail = discrete_region_moment(spec, 0.0, s, closed);
        out.truncated_moment = discrete_region_moment(spec, q, s, closed);
        out.ratio.value = out.tail > 0.0 ? out.truncated_moment / (std::pow(s, q) * out.tail) : kNaN;
        return out;
    }
    if (spec.monte_carlo_tails()) {
        const auto view = mc_view(spec);
        const auto& v = *view.sorted;
        const std::size_t first = first_index_above(v, s / view.scale, closed);
        const std::size_t k = v.size() - first;
        out.ratio.value = kNaN;
        if (k == 0) return out;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t i = first; i < v.size(); ++i) {
            const double r = std::pow(v[i] * view.scale / s, q);
            sum += r;
            sum_sq += r * r;
        }
        const double n = static_cast<double>(k);
        const double m = sum / n;
        const double var = k > 1 ? std::max(0.0, (sum_sq - n * m * m) / (n - 1.0)) : m * m;
        out.tail = n / static_cast<double>(v.size());
        out.truncated_moment = std::pow(s, q) * sum / static_cast<double>(v.size());
        out.ratio = {m, std::sqrt(var / n)};
        return out;
    }
    out.ratio.value = kNaN;
    const auto sides = abs_region(spec, s);
    if (sides.empty()) return out;
    const double log_scale = region_log_scale(spec, sides);
    const double mass = region_integral(spec, sides, log_scale, [](double) { return 1.0; });
    if (!(mass > 0.0)) return out;
    const double weighted = region_integral(spec, sides, log_scale, [q, s](double y) { return std::pow(y / s, q); });
    out.tail = std::min(1.0, std::exp(log_scale) * mass);
    out.truncated_moment = std::exp(log_scale + q * std::log(s)) * weighted;
    out.ratio.value = weighted / mass;
    return out;
}

RatioEstimate tail_moment_ratio(const DistributionSpec& spec, double q, double s, bool closed) {
    return tail_summary(spec, q, s, closed).ratio;
}

double abs_quantile(const DistributionSpec& spec, double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("abs_quantile: level must lie in (0, 1)");
    const double target = 1.0 - u;  // P(|Z| > c) at the quantile
    if (!spec.continuous()) {
        return std::visit(overloaded{
                              [](const Rademacher&) { return 1.0; },
                              [](const PointMass& p) { return std::fabs(p.value); },
                              [](const SymmetricNIG&) { return 0.0; },
                              [u](const Poisson& p) {
                                  double cdf_k = 0.0;
                                  for (double k = 0.0;; k += 1.0) {
                                      cdf_k += std::exp(poisson_log_pmf(p.rate, k));
                                      if (cdf_k >= u) return k;
                                  }
                              },
                              [](const auto&) { return kNaN; },
                          },
                          spec.family());
    }
    if (spec.monte_carlo_tails()) {
        const auto view = mc_view(spec);
        const auto& v = *view.sorted;
        const auto idx = static_cast<std::size_t>(std::ceil(u * static_cast<double>(v.size()))) - 1;
        return v[std::min(idx, v.size() - 1)] * view.scale;
    }
    // Root of log P(|Z| > c) - log(target) in log c.
    auto excess = [&](double log_c) { return tail_prob(spec, std::exp(log_c)) - target; };
    double lo = std::log(spec.scale_hint());
    double hi = lo;
    for (int i = 0; i < 200 && excess(lo) <= 0.0; ++i) lo -= std::log(4.0);
    for (int i = 0; i < 200 && excess(hi) >= 0.0; ++i) hi += std::log(4.0);
    if (excess(lo) <= 0.0) throw TailUnderflow("abs_quantile: quantile below the representable range");
    if (excess(hi) >= 0.0) throw TailUnderflow("abs_quantile: quantile above the representable range");
    if (lo == hi) hi = lo + 1e-12;
    std::uintmax_t iterations = 200;
    const auto range = boost::math::tools::toms748_solve(
        excess, lo, hi, [](double a, double b) { return std::fabs(a - b) <= 1e-13 * std::max(1.0, std::fabs(a)); },
        iterations);
    return std::exp(0.5 * (range.first + range.second));
}

double mean(const DistributionSpec& spec) {
    return std::visit(
        overloaded{
            [](const Gaussian& g) { return g.mean; },
            [](const Rademacher&) { return 0.0; },
            [](const Poisson& p) { return p.rate; },
            [](const GammaLaw& g) { return g.shape / g.rate; },
            [](const Exponential& e) { return 1.0 / e.rate; },
            [](const SymmetricStable& s) -> double {
                if (s.alpha > 1.0) return 0.0;
                throw MomentDoesNotExist("symmetric_stable with alpha <= 1 has no mean");
            },
            [](const InverseGaussian& ig) { return ig.mu; },
            [](const SymmetricNIG& n) -> double {
                if (is_cauchy_nig(n)) throw MomentDoesNotExist("symmetric_nig with alpha = 0 has no mean");
                return 0.0;
            },
            [](const PointMass& p) { return p.value; },
            [](const Uniform& u) { return 0.5 * (u.a + u.b); },
            [](const Pareto& p) -> double {
                if (p.alpha <= 1.0) throw MomentDoesNotExist("pareto with alpha <= 1 has no mean");
                return p.alpha * p.scale / (p.alpha - 1.0);
            },
        },
        spec.family());
}

double variance(const DistributionSpec& spec) {
    return std::visit(
        overloaded{
            [](const Gaussian& g) { return g.variance; },
            [](const Rademacher&) { return 1.0; },
            [](const Poisson& p) { return p.rate; },
            [](const GammaLaw& g) { return g.shape / (g.rate * g.rate); },
            [](const Exponential& e) { return 1.0 / (e.rate * e.rate); },
            [](const SymmetricStable& s) -> double {
                if (s.alpha == 2.0) return 2.0 * s.scale * s.scale;
                throw MomentDoesNotExist("symmetric_stable with alpha < 2 has infinite variance");
            },
            [](const InverseGaussian& ig) { return ig.mu * ig.mu * ig.mu / ig.lambda; },
            [](const SymmetricNIG& n) -> double {
                if (is_degenerate_nig(n)) return 0.0;
                if (is_cauchy_nig(n)) throw MomentDoesNotExist("symmetric_nig with alpha = 0 has no variance");
                return n.delta / n.alpha;
            },
            [](const PointMass&) { return 0.0; },
            [](const Uniform& u) { return (u.b - u.a) * (u.b - u.a) / 12.0; },
            [](const Pareto& p) -> double {
                if (p.alpha <= 2.0) throw MomentDoesNotExist("pareto with alpha <= 2 has infinite variance");
                const double a = p.alpha;
                return p.scale * p.scale * a / ((a - 1.0) * (a - 1.0) * (a - 2.0));
            },
        },
        spec.family());
}

double centered_ess_sup(const DistributionSpec& spec) {
    return std::visit(overloaded{
                          [](const Rademacher&) { return 1.0; },
                          [](const PointMass&) { return 0.0; },
                          [](const SymmetricNIG& n) { return is_degenerate_nig(n) ? 0.0 : kInf; },
                          [](const Uniform& u) { return 0.5 * (u.b - u.a); },
                          [](const auto&) { return kInf; },
                      },
                      spec.family());
}

DistributionSpec scale_by(const DistributionSpec& spec, double c) {
    require(positive_finite(c), "scale_by: factor must be positive");
    return std::visit(
        overloaded{
            [c](const Gaussian& g) { return DistributionSpec(Gaussian{c * g.mean, c * c * g.variance}); },
            [c, &spec](const Rademacher&) {
                require(c == 1.0, "scale_by: rademacher is not closed under scaling");
                return spec;
            },
            [c, &spec](const Poisson&) {
                require(c == 1.0, "scale_by: poisson is not closed under scaling");
                return spec;
            },
            [c](const GammaLaw& g) { return DistributionSpec(GammaLaw{g.shape, g.rate / c}); },
            [c](const Exponential& e) { return DistributionSpec(Exponential{e.rate / c}); },
            [c](const SymmetricStable& s) { return DistributionSpec(SymmetricStable{s.alpha, c * s.scale}); },
            [c](const InverseGaussian& ig) { return DistributionSpec(InverseGaussian{c * ig.mu, c * ig.lambda}); },
            [c](const SymmetricNIG& n) { return DistributionSpec(SymmetricNIG{n.alpha / c, c * n.delta}); },
            [c](const PointMass& p) { return DistributionSpec(PointMass{c * p.value}); },
            [c](const Uniform& u) { return DistributionSpec(Uniform{c * u.a, c * u.b}); },
            [c](const Pareto& p) { return DistributionSpec(Pareto{p.alpha, c * p.scale}); },
        },
        spec.family());
}

// --- sampling ---------------------------------------------------------------------------

namespace {

/// Michael-Schucany-Haas transformation: one normal and one uniform draw.
double draw_inverse_gaussian(double mu, double lambda, Engine& e, std::normal_distribution<double>& normal,
                             std::uniform_real_distribution<double>& unit) {
    const double nu = normal(e);
    const double w = mu * nu * nu / (2.0 * lambda);
    // Smaller root of the quadratic, written without cancellation.
    const double x = mu / (1.0 + w + std::sqrt(w * (w + 2.0)));
    return unit(e) <= mu / (mu + x) ? x : mu * mu / x;
}

}  // namespace

Sampler::Sampler(const DistributionSpec& spec) : spec_(spec) {}

double Sampler::operator()(Engine& e) {
    return std::visit(
        overloaded{
            [&](const Gaussian& g) { return g.mean + std::sqrt(g.variance) * normal_(e); },
            [&](const Rademacher&) { return (e() >> 63) != 0U ? 1.0 : -1.0; },
            [&](const Poisson& p) {
                std::poisson_distribution<long long> d(p.rate);
                return static_cast<double>(d(e));
            },
            [&](const GammaLaw& g) {
                std::gamma_distribution<double> d(g.shape, 1.0 / g.rate);
                return d(e);
            },
            [&](const Exponential& x) { return exponential_(e) / x.rate; },
            [&](const SymmetricStable& s) {
                if (s.alpha == 2.0) return s.scale * std::numbers::sqrt2 * normal_(e);
                return s.scale * draw_stable_unit(s.alpha, e, unit_, exponential_);
            },
            [&](const InverseGaussian& ig) { return draw_inverse_gaussian(ig.mu, ig.lambda, e, normal_, unit_); },
            [&](const SymmetricNIG& n) {
                if (is_degenerate_nig(n)) return 0.0;
                if (is_cauchy_nig(n)) {
                    double d = normal_(e);
                    while (d == 0.0) d = normal_(e);
                    return n.delta * normal_(e) / std::fabs(d);
                }
                // Normal variance mixture with an IG(delta/alpha, delta^2) variance.
                const double mix = draw_inverse_gaussian(n.delta / n.alpha, n.delta * n.delta, e, normal_, unit_);
                return normal_(e) * std::sqrt(mix);
            },
            [&](const PointMass& p) { return p.value; },
            [&](const Uniform& u) { return u.a + (u.b - u.a) * unit_(e); },
            [&](const Pareto& p) { return p.scale * std::pow(1.0 - unit_(e), -1.0 / p.alpha); },
        },
        spec_.family());
}

std::vector<double> sample(const DistributionSpec& spec, std::uint64_t seed, std::size_t n, std::uint64_t stream) {
    if (n == 0) throw DomainError("sample: n must be >= 1");
    std::vector<double> out(n);
    for_each_chunk(n, kChunkSize, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Engine engine = make_engine(seed, stream, chunk);
        Sampler draw(spec);
        for (std::size_t i = begin; i < end; ++i) out[i] = draw(engine);
    });
    return out;
}

// --- scale families -----------------------------------------------------------------------

DistributionSpec ScaleFamily::law_at(double m) const {
    require(positive_finite(m), "law_at: scale must be positive");
    return std::visit(
        overloaded{
            [m](const Gaussian& g) { return DistributionSpec(Gaussian{m * g.mean, m * g.variance}); },
            [m, this](const Rademacher&) {
                require(m == 1.0, "law_at: rademacher is not infinitely divisible; only m = 1 is defined");
                return base;
            },
            [m](const Poisson& p) { return DistributionSpec(Poisson{m * p.rate}); },
            [m](const GammaLaw& g) { return DistributionSpec(GammaLaw{m * g.shape, g.rate}); },
            [m, this](const Exponential& e) {
                return m == 1.0 ? base : DistributionSpec(GammaLaw{m, e.rate});
            },
            [m](const SymmetricStable& s) {
                return DistributionSpec(SymmetricStable{s.alpha, s.scale * std::pow(m, 1.0 / s.alpha)});
            },
            [m](const InverseGaussian& ig) {
                return DistributionSpec(InverseGaussian{m * ig.mu, m * m * ig.lambda});
            },
            [m](const SymmetricNIG& n) { return DistributionSpec(SymmetricNIG{n.alpha, m * n.delta}); },
            [m](const PointMass& p) { return DistributionSpec(PointMass{m * p.value}); },
            [m, this](const Uniform&) {
                require(m == 1.0, "law_at: uniform is not infinitely divisible; only m = 1 is defined");
                return base;
            },
            [m, this](const Pareto&) {
                require(m == 1.0, "law_at: pareto scale family is not defined; only m = 1");
                return base;
            },
        },
        base.family());
}

}  // namespace chaoslab
