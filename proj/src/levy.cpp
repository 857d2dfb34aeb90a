#include "chaoslab/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chaoslab/errors.hpp"
#include "chaoslab/quadrature.hpp"

namespace chaoslab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double one_minus_cos(double u) {
    const double h = std::sin(0.5 * u);
    return 2.0 * h * h;
}

quad::Options options(double rel_tol = 1e-10) {
    quad::Options o;
    o.rel_tol = rel_tol;
    o.abs_tol = 0.0;
    o.max_intervals = 20000;
    return o;
}

/// int_0^a g(x) dx through x = a e^{-v}; copes with integrable blow-up at 0.
double integrate_toward_zero(const std::function<double(double)>& g, double a, double rel_tol = 1e-10) {
    if (!(a > 0.0)) return 0.0;
    return quad::integrate_to_infinity(
               [&g, a](double v) {
                   if (v > 700.0) return 0.0;
                   const double x = a * std::exp(-v);
                   return x > 0.0 ? g(x) * x : 0.0;
               },
               0.0, options(rel_tol))
        .value;
}

/// int_a^b g(x) dx on a log scale, 0 < a < b.
double integrate_log_range(const std::function<double(double)>& g, double a, double b, double rel_tol = 1e-10) {
    if (!(b > a)) return 0.0;
    return quad::integrate(
               [&g](double v) {
                   const double x = std::exp(v);
                   return g(x) * x;
               },
               std::log(a), std::log(b), options(rel_tol))
        .value;
}

/// int_U^inf cos(u) u^{-beta} du (want_cos) or the sine version, by repeated
/// integration by parts; valid for large U.
double oscillatory_tail(double U, double beta, bool want_cos, int depth = 0) {
    if (depth > 12) return 0.0;
    if (want_cos) return -std::sin(U) * std::pow(U, -beta) + beta * oscillatory_tail(U, beta + 1.0, false, depth + 1);
    return std::cos(U) * std::pow(U, -beta) - beta * oscillatory_tail(U, beta + 1.0, true, depth + 1);
}

/// F(U) = int_0^U (1 - cos u) u^{-1-alpha} du.
double power_law_kernel(double alpha, double U) {
    const double full = kPi / (2.0 * std::tgamma(1.0 + alpha) * std::sin(kPi * alpha / 2.0));
    if (U > 64.0) {
        // F(inf) - int_U^inf u^{-1-alpha} du + int_U^inf cos(u) u^{-1-alpha} du
        return full - std::pow(U, -alpha) / alpha + oscillatory_tail(U, 1.0 + alpha, true);
    }
    const auto g = [alpha](double u) { return one_minus_cos(u) * std::pow(u, -1.0 - alpha); };
    const double first = std::min(U, kPi);
    double total = integrate_toward_zero(g, first);
    if (U > first) {
        std::vector<double> breaks{first};
        while (breaks.back() < U) breaks.push_back(std::min(U, breaks.back() + kPi));
        total += quad::integrate_pieces(g, breaks, options()).value;
    }
    return total;
}

double atomic_sum(const AtomicJumps& a, const std::function<double(const Atom&)>& f) {
    double s = 0.0;
    for (const auto& atom : a.atoms) s += f(atom);
    return s;
}

/// int over [-R, R] \ {0} of g(x) f(x) dx for a density jump part.
double density_integral(const DensityJumps& dj, const std::function<double(double)>& g) {
    const auto pos = [&](double x) { return g(x) * dj.density(x); };
    const auto neg = [&](double x) { return g(-x) * dj.density(-x); };
    const double right = integrate_toward_zero(pos, dj.radius);
    if (dj.symmetric) return 2.0 * right;
    return right + integrate_toward_zero(neg, dj.radius);
}

double characteristic_length(const LevyModel& model, double t) {
    double L = 0.0;
    if (model.gaussian_variance > 0.0) L = std::sqrt(model.gaussian_variance * t);
    std::visit(overloaded{
                   [](const NoJumps&) {},
                   [&L](const AtomicJumps& a) {
                       for (const auto& atom : a.atoms) L = std::max(L, std::fabs(atom.size));
                   },
                   [&L](const TruncatedPowerLaw& p) { L = std::max(L, p.cutoff); },
                   [&L](const DensityJumps& d) { L = std::max(L, d.radius); },
               },
               model.jumps);
    return L > 0.0 ? L : 1.0;
}

bool unbounded_exponent(const LevyModel& model) {
    return model.gaussian_variance > 0.0 || std::holds_alternative<TruncatedPowerLaw>(model.jumps) ||
           std::holds_alternative<DensityJumps>(model.jumps);
}

std::vector<double> frequency_breaks(double s_c, double upper) {
    std::vector<double> b{0.0};
    for (double s = s_c * std::ldexp(1.0, -20); s < upper; s *= 2.0) b.push_back(s);
    b.push_back(upper);
    return b;
}

}  // namespace

// --- model ------------------------------------------------------------------------------

void LevyModel::validate() const {
    if (!(gaussian_variance >= 0.0) || !std::isfinite(gaussian_variance)) {
        throw DomainError("levy model: gaussian_variance must be finite and >= 0");
    }
    if (!std::isfinite(drift)) throw DomainError("levy model: drift must be finite");
    std::visit(overloaded{
                   [](const NoJumps&) {},
                   [](const AtomicJumps& a) {
                       for (const auto& atom : a.atoms) {
                           if (!(atom.rate > 0.0) || !std::isfinite(atom.rate)) {
                               throw DomainError("levy model: jump rates must be positive");
                           }
                           if (atom.size == 0.0 || !std::isfinite(atom.size)) {
                               throw DomainError("levy model: jump sizes must be finite and nonzero");
                           }
                       }
                   },
                   [](const TruncatedPowerLaw& p) {
                       if (!(p.c > 0.0) || !std::isfinite(p.c)) throw DomainError("levy model: c must be positive");
                       if (!(p.alpha > 0.0 && p.alpha < 2.0)) throw DomainError("levy model: alpha must lie in (0, 2)");
                       if (!(p.cutoff > 0.0) || !std::isfinite(p.cutoff)) {
                           throw DomainError("levy model: cutoff must be positive");
                       }
                   },
                   [](const DensityJumps& d) {
                       if (!d.density) throw DomainError("levy model: density function missing");
                       if (!(d.radius > 0.0) || !std::isfinite(d.radius)) {
                           throw DomainError("levy model: density radius must be positive and finite");
                       }
                       if (!d.square_integrable) {
                           throw DomainError("levy model: density must be declared square integrable");
                       }
                   },
               },
               jumps);
}

bool LevyModel::symmetric() const {
    if (drift != 0.0) return false;
    return std::visit(overloaded{
                          [](const NoJumps&) { return true; },
                          [](const AtomicJumps& a) {
                              std::vector<std::pair<double, double>> plus;
                              std::vector<std::pair<double, double>> minus;
                              for (const auto& atom : a.atoms) {
                                  plus.emplace_back(atom.size, atom.rate);
                                  minus.emplace_back(-atom.size, atom.rate);
                              }
                              std::sort(plus.begin(), plus.end());
                              std::sort(minus.begin(), minus.end());
                              return plus == minus;
                          },
                          [](const TruncatedPowerLaw&) { return true; },
                          [](const DensityJumps& d) { return d.symmetric; },
                      },
                      jumps);
}

bool LevyModel::deterministic() const {
    if (gaussian_variance > 0.0) return false;
    if (std::holds_alternative<NoJumps>(jumps)) return true;
    if (const auto* a = std::get_if<AtomicJumps>(&jumps)) return a->atoms.empty();
    return false;
}

std::string LevyModel::describe() const {
    std::ostringstream out;
    out.precision(17);
    out << "levy(sigma2=" << gaussian_variance << ", drift=" << drift << ", jumps=";
    std::visit(overloaded{
                   [&](const NoJumps&) { out << "none"; },
                   [&](const AtomicJumps& a) {
                       out << "atomic[";
                       for (std::size_t i = 0; i < a.atoms.size(); ++i) {
                           out << (i ? ", " : "") << a.atoms[i].size << "@" << a.atoms[i].rate;
                       }
                       out << "]";
                   },
                   [&](const TruncatedPowerLaw& p) {
                       out << "truncated_power_law(c=" << p.c << ", alpha=" << p.alpha << ", cutoff=" << p.cutoff << ")";
                   },
                   [&](const DensityJumps& d) { out << d.label; },
               },
               jumps);
    out << ")";
    return out.str();
}

// --- exponents -------------------------------------------------------------------------

double kappa(const LevyModel& model, double s) {
    s = std::fabs(s);
    if (s == 0.0) return 0.0;
    const double gauss = 0.5 * model.gaussian_variance * s * s;
    const double jump = std::visit(
        overloaded{
            [](const NoJumps&) { return 0.0; },
            [s](const AtomicJumps& a) {
                return atomic_sum(a, [s](const Atom& atom) { return atom.rate * one_minus_cos(s * atom.size); });
            },
            [s](const TruncatedPowerLaw& p) {
                return 2.0 * p.c * std::pow(s, p.alpha) * power_law_kernel(p.alpha, s * p.cutoff);
            },
            [s](const DensityJumps& d) { return density_integral(d, [s](double x) { return one_minus_cos(s * x); }); },
        },
        model.jumps);
    return gauss + jump;
}

std::complex<double> characteristic_function(const LevyModel& model, double t, double s) {
    double phase = model.drift * s;
    if (const auto* a = std::get_if<AtomicJumps>(&model.jumps)) {
        phase += atomic_sum(*a, [s](const Atom& atom) { return atom.rate * std::sin(s * atom.size); });
    } else if (const auto* d = std::get_if<DensityJumps>(&model.jumps); d != nullptr && !d->symmetric) {
        throw DomainError("characteristic_function: non-symmetric density models have no compensated phase here");
    }
    return std::polar(std::exp(-t * kappa(model, s)), t * phase);
}

double psi(const LevyModel& model, double s) {
    s = std::fabs(s);
    if (s == 0.0) return 0.0;
    return std::visit(
        overloaded{
            [](const NoJumps&) { return 0.0; },
            [s](const AtomicJumps& a) {
                return 4.0 * atomic_sum(a, [s](const Atom& atom) {
                           const double u = s * atom.size;
                           return atom.rate * std::min(1.0, u * u);
                       });
            },
            [s](const TruncatedPowerLaw& p) {
                const auto f = [&p](double x) { return p.c * std::pow(x, -1.0 - p.alpha); };
                const double knee = std::min(p.cutoff, 1.0 / s);
                double one_side = integrate_toward_zero([&](double x) { return s * s * x * x * f(x); }, knee);
                one_side += integrate_log_range(f, knee, p.cutoff);
                return 8.0 * one_side;
            },
            [s](const DensityJumps& d) {
                return 4.0 * density_integral(d, [s](double x) {
                           const double u = s * x;
                           return std::min(1.0, u * u);
                       });
            },
        },
        model.jumps);
}

double jump_second_moment(const LevyModel& model) {
    return std::visit(overloaded{
                          [](const NoJumps&) { return 0.0; },
                          [](const AtomicJumps& a) {
                              return atomic_sum(a, [](const Atom& x) { return x.rate * x.size * x.size; });
                          },
                          [](const TruncatedPowerLaw& p) {
                              return 2.0 * p.c * std::pow(p.cutoff, 2.0 - p.alpha) / (2.0 - p.alpha);
                          },
                          [](const DensityJumps& d) { return density_integral(d, [](double x) { return x * x; }); },
                      },
                      model.jumps);
}

double jump_mean(const LevyModel& model) {
    return std::visit(overloaded{
                          [](const NoJumps&) { return 0.0; },
                          [](const AtomicJumps& a) {
                              return atomic_sum(a, [](const Atom& x) { return x.rate * x.size; });
                          },
                          [](const TruncatedPowerLaw&) { return 0.0; },
                          [](const DensityJumps& d) {
                              if (d.symmetric) return 0.0;
                              return density_integral(d, [](double x) { return x; });
                          },
                      },
                      model.jumps);
}

double jump_total_mass(const LevyModel& model) {
    return std::visit(overloaded{
                          [](const NoJumps&) { return 0.0; },
                          [](const AtomicJumps& a) { return atomic_sum(a, [](const Atom& x) { return x.rate; }); },
                          [](const auto&) { return kInf; },
                      },
                      model.jumps);
}

double mean(const LevyModel& model) { return model.drift + jump_mean(model); }

double variance(const LevyModel& model) { return model.gaussian_variance + jump_second_moment(model); }

double second_moment(const LevyModel& model, double t) {
    model.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("second_moment: t must be >= 0");
    const double mu = mean(model);
    return variance(model) * t + mu * mu * t * t;
}

// --- L1 norms ----------------------------------------------------------------------------

L1Result l1_norm_cf(const LevyModel& model, double t, const L1Config& config) {
    model.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("l1_norm_cf: t must be positive");
    L1Result out;
    if (model.deterministic()) {
        out.value = std::fabs(model.drift) * t;
        return out;
    }
    const bool sym = model.symmetric();
    // The symmetrization Y - Y' has exponent 2 kappa.
    const double factor = sym ? 1.0 : 2.0;
    const auto g = [&](double s) {
        if (s == 0.0) return 0.0;
        return -std::expm1(-t * factor * kappa(model, s)) / (s * s);
    };
    const double s_c = 1.0 / characteristic_length(model, t * factor);
    double upper = config.frequency_span * s_c;
    if (unbounded_exponent(model)) {
        for (int i = 0; i < 60 && t * factor * kappa(model, upper) < 40.0; ++i) upper *= 2.0;
    }
    quad::Options o = options(config.rel_tol);
    o.max_intervals = 40000;
    const double body = quad::integrate_pieces(g, frequency_breaks(s_c, upper), o).value;
    const auto band_mean = [&](double a, double b) {
        return quad::integrate([&](double s) { return -std::expm1(-t * factor * kappa(model, s)); }, a, b, o).value /
               (b - a);
    };
    const double hi = band_mean(0.5 * upper, upper);
    const double lo = band_mean(0.25 * upper, 0.5 * upper);
    out.tail = (2.0 / kPi) * hi / upper;
    out.upper_limit = upper;
    out.value = (2.0 / kPi) * body + out.tail;
    const double uncertainty = (2.0 / kPi) * std::fabs(hi - lo) / upper;
    if (uncertainty > config.slow_decay_tolerance * out.value) {
        std::ostringstream w;
        w << "SlowDecay: tail beyond s=" << upper << " estimated as " << out.tail << " with uncertainty "
          << uncertainty;
        out.warnings.push_back(w.str());
    }
    if (!sym) {
        out.value += std::fabs(mean(model)) * t;
        out.is_bound = true;
        out.warnings.emplace_back("model is not symmetric: value is the symmetrization bound, not ||Y_t||_1");
    }
    return out;
}

L1Result l1_upper_bound_psi(const LevyModel& model, double t, const L1Config& config) {
    model.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("l1_upper_bound_psi: t must be positive");
    if (!model.symmetric()) throw DomainError("l1_upper_bound_psi: model must be symmetric");
    if (model.has_gaussian_part()) throw DomainError("l1_upper_bound_psi: model must have no Gaussian component");
    L1Result out;
    out.is_bound = true;
    if (model.deterministic()) return out;
    const double s_c = 1.0 / characteristic_length(model, t);
    const double upper = config.frequency_span * s_c;
    const auto g = [&](double s) { return s == 0.0 ? 0.0 : std::min(1.0, t * psi(model, s)) / (s * s); };
    quad::Options o = options(config.rel_tol);
    o.max_intervals = 40000;
    const double body = quad::integrate_pieces(g, frequency_breaks(s_c, upper), o).value;
    // psi <= 4 nu(R) bounds the integrand beyond the cut.
    out.tail = (2.0 / kPi) * std::min(1.0, 4.0 * t * jump_total_mass(model)) / upper;
    out.upper_limit = upper;
    out.value = (2.0 / kPi) * body + out.tail;
    return out;
}

std::vector<MomentRatioRow> moment_ratio_curve(const LevyModel& model, const std::vector<double>& t_grid,
                                               const L1Config& config) {
    if (t_grid.empty()) throw DomainError("moment_ratio_curve: empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] < t_grid[i - 1]))) {
            throw DomainError("moment_ratio_curve: t grid must be positive and decreasing");
        }
    }
    std::vector<MomentRatioRow> rows;
    for (double t : t_grid) {
        const L1Result l1 = l1_norm_cf(model, t, config);
        MomentRatioRow row;
        row.t = t;
        row.l1 = l1.value;
        row.l1_is_bound = l1.is_bound;
        row.l2 = std::sqrt(second_moment(model, t));
        row.ratio = row.l1 > 0.0 ? row.l2 / row.l1 : kInf;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace chaoslab
