#include "chaoslab/cq_checker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "chaoslab/errors.hpp"
#include "chaoslab/random.hpp"

namespace chaoslab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

struct ScaleOutcome {
    ScaleRecord record;
    std::optional<std::string> missing_moment;
    std::optional<std::string> underflow;
};

ScaleOutcome evaluate_scale(const DistributionSpec& law, double m, double q, const CqConfig& config) {
    ScaleOutcome out;
    out.record.m = m;
    out.record.law = describe(law);
    if (!moment_exists(law, q)) {
        out.missing_moment = "E|Z|^" + fmt(q) + " is infinite for " + out.record.law;
        return out;
    }
    const double c = abs_quantile(law, config.c_level);
    out.record.c_z = c;
    out.record.beta1 = tail_prob_closed(law, c);
    if (!(c > 0.0)) {
        // Degenerate at zero: every event {|Z| > s}, s > 0, is null.
        out.record.beta2 = 0.0;
        return out;
    }
    double best = 0.0;
    double best_err = 0.0;
    for (double mult : config.s_multipliers) {
        const double s = c * mult;
        // At s = c_Z the event is closed, matching the mass condition.
        const bool closed = !law.continuous() && mult == 1.0;
        const TailSummary t = tail_summary(law, q, s, closed);
        if (!std::isfinite(t.ratio.value)) continue;
        out.record.curve.push_back({s, t.ratio.value, t.ratio.stderr_, t.tail, t.truncated_moment});
        if (t.ratio.value > best) {
            best = t.ratio.value;
            best_err = t.ratio.stderr_;
        }
    }
    out.record.beta2 = best;
    out.record.beta2_stderr = best_err;
    return out;
}

void validate(const CqConfig& config, double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("check_cq: q must be positive and finite");
    if (!(config.c_level > 0.0 && config.c_level < 1.0)) throw DomainError("check_cq: c_level must lie in (0, 1)");
    const auto& g = config.s_multipliers;
    if (g.empty() || g.front() != 1.0) throw DomainError("check_cq: s-grid must start at c_Z (multiplier 1)");
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (!(g[i] > g[i - 1]) || !std::isfinite(g[i])) throw DomainError("check_cq: s-grid must increase");
    }
    if (!(config.beta2_cap > 0.0)) throw DomainError("check_cq: beta2_cap must be positive");
    if (!(config.growth_factor > 1.0)) throw DomainError("check_cq: growth_factor must exceed 1");
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::FailDivergent: return "FAIL_DIVERGENT";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

Verdict verdict_from_string(std::string_view s) {
    if (s == "PASS") return Verdict::Pass;
    if (s == "FAIL_DIVERGENT") return Verdict::FailDivergent;
    if (s == "INCONCLUSIVE") return Verdict::Inconclusive;
    throw DomainError("unknown verdict '" + std::string(s) + "'");
}

std::vector<double> geometric_grid(double a, double b, std::size_t n) {
    if (!(a > 0.0 && b > 0.0) || n == 0) throw DomainError("geometric_grid: need a, b > 0 and n >= 1");
    if (n == 1) return {a};
    std::vector<double> out(n);
    const double la = std::log(a);
    const double lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = a;
    out.back() = b;
    return out;
}

std::vector<double> default_s_multipliers() { return geometric_grid(1.0, 1e3, 40); }

CqReport check_cq(const ScaleFamily& family, double q, const CqConfig& config) {
    validate(config, q);
    std::vector<double> scales = family.scales.empty() ? std::vector<double>{1.0} : family.scales;
    for (double m : scales) {
        if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("check_cq: scales must be positive");
    }
    std::sort(scales.begin(), scales.end(), std::greater<>());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());

    std::vector<DistributionSpec> laws;
    for (double m : scales) laws.push_back(family.law_at(m));

    std::vector<ScaleOutcome> outcomes(scales.size());
    for_each_chunk(scales.size(), 1, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                outcomes[i] = evaluate_scale(laws[i], scales[i], q, config);
            } catch (const TailUnderflow& e) {
                outcomes[i].underflow = e.what();
            }
        }
    });
    // scales are descending: drop the first unresolvable one and everything below it
    std::string dropped;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].underflow) continue;
        if (i == 0) throw TailUnderflow("check_cq: scale " + fmt(scales[0]) + ": " + *outcomes[0].underflow);
        dropped = "scales m <= " + fmt(scales[i]) + " dropped (" + *outcomes[i].underflow + "); ";
        outcomes.resize(i);
        scales.resize(i);
        break;
    }

    CqReport report;
    report.q = q;
    report.family = describe(family.base);
    for (auto& o : outcomes) {
        if (o.missing_moment) {
            report.verdict = Verdict::FailDivergent;
            report.diagnostics = *o.missing_moment;
            report.beta2_max = kInf;
            report.scales.push_back(std::move(o.record));
            return report;
        }
        report.scales.push_back(std::move(o.record));
    }

    report.beta1_min = 1.0;
    report.beta2_max = 0.0;
    bool monte_carlo = false;
    double noise = 0.0;
    for (const auto& r : report.scales) {
        report.beta1_min = std::min(report.beta1_min, r.beta1);
        report.beta2_max = std::max(report.beta2_max, r.beta2);
        noise = std::max(noise, r.beta2_stderr);
        monte_carlo = monte_carlo || r.beta2_stderr > 0.0;
    }
    std::ostringstream diag;
    diag << dropped;
    for (const auto& r : report.scales) {
        if (r.curve.empty() && r.c_z > 0.0) {
            report.verdict = Verdict::Inconclusive;
            report.diagnostics = "no s-grid point with a nonzero tail at scale " + fmt(r.m);
            return report;
        }
    }

    const std::size_t n = report.scales.size();
    if (n >= 2) {
        std::vector<double> b;
        for (const auto& r : report.scales) b.push_back(r.beta2);
        const double first = std::max(b.front(), 1e-300);
        const double growth = b.back() / first;
        diag << "beta2 " << fmt(b.front()) << " at m=" << fmt(scales.front()) << " -> " << fmt(b.back())
             << " at m=" << fmt(scales.back()) << " (growth x" << fmt(growth) << ")";
        if (!std::isfinite(growth) || growth > config.growth_factor) {
            diag << " exceeds factor " << fmt(config.growth_factor);
            report.verdict = Verdict::FailDivergent;
            report.diagnostics = diag.str();
            return report;
        }
        if (n >= 3) {
            auto per_decade = [&](std::size_t k) {
                return (b[k] - b[k - 1]) / std::log10(scales[k - 1] / scales[k]);
            };
            const double last = per_decade(n - 1);
            const double prev = per_decade(n - 2);
            const double tol = config.flat_tolerance * std::fabs(b.back()) + 3.0 * noise;
            if (last > tol) {
                const double r = prev > tol ? last / prev : kInf;
                diag << "; last per-decade increment " << fmt(last) << ", ratio to previous " << fmt(r);
                if (r >= config.increment_ratio) {
                    diag << " >= " << fmt(config.increment_ratio) << " (no saturation as m -> 0)";
                    report.verdict = monte_carlo ? Verdict::Inconclusive : Verdict::FailDivergent;
                    report.diagnostics = diag.str();
                    return report;
                }
                diag << " (saturating)";
            } else {
                diag << "; flat at the smallest scales";
            }
        }
    } else {
        diag << "single scale m=" << fmt(scales.front()) << ", beta2 " << fmt(report.beta2_max);
    }

    if (monte_carlo && report.beta2_max - 3.0 * noise <= config.beta2_cap &&
        report.beta2_max + 3.0 * noise > config.beta2_cap) {
        diag << "; Monte Carlo interval straddles the cap";
        report.verdict = Verdict::Inconclusive;
    } else if (report.beta2_max <= config.beta2_cap && report.beta1_min >= config.beta1_floor) {
        report.verdict = Verdict::Pass;
    } else {
        diag << "; beta2 above cap " << fmt(config.beta2_cap) << " or beta1 below floor " << fmt(config.beta1_floor);
        report.verdict = Verdict::Inconclusive;
    }
    report.diagnostics = diag.str();
    return report;
}

CinfReport check_cinf(const std::vector<DistributionSpec>& specs) {
    if (specs.empty()) throw DomainError("check_cinf: no distributions given");
    CinfReport report;
    for (const auto& spec : specs) {
        CinfEntry e;
        e.law = describe(spec);
        e.ess_sup = centered_ess_sup(spec);
        try {
            e.sd = std::sqrt(variance(spec));
        } catch (const MomentDoesNotExist&) {
            e.sd = kInf;
        }
        if (e.sd == 0.0) {
            e.ratio = 0.0;  // degenerate member, contributes nothing
        } else if (!std::isfinite(e.ess_sup)) {
            e.ratio = kInf;
        } else {
            e.ratio = e.ess_sup / e.sd;
        }
        report.beta3 = std::max(report.beta3, e.ratio);
        report.entries.push_back(std::move(e));
    }
    if (std::isfinite(report.beta3)) {
        report.verdict = Verdict::Pass;
        report.diagnostics = "all members bounded";
    } else {
        report.verdict = Verdict::FailDivergent;
        for (const auto& e : report.entries) {
            if (!std::isfinite(e.ratio)) {
                report.diagnostics = e.law + " has unbounded support";
                break;
            }
        }
    }
    return report;
}

double moment_ratio_bound(double beta1, double beta2, double p, double q) {
    if (!(p > 0.0 && p < q && std::isfinite(q))) throw DomainError("moment_ratio_bound: need 0 < p < q < inf");
    if (!(beta1 > 0.0 && beta1 <= 1.0)) throw DomainError("moment_ratio_bound: beta1 must lie in (0, 1]");
    if (!(beta2 > 0.0) || !std::isfinite(beta2)) throw DomainError("moment_ratio_bound: beta2 must be positive");
    return std::pow(std::max(beta2, 1.0), 1.0 / q) * std::pow(beta1, -1.0 / p);
}

namespace {

struct Fit {
    double slope;
    double intercept;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo, std::size_t hi) {
    const double n = static_cast<double>(hi - lo);
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace

TailIndexResult tail_index_estimate(const std::function<double(double)>& tail, const std::vector<double>& s_grid,
                                    double curvature_threshold) {
    if (s_grid.size() < 4) throw DomainError("tail_index_estimate: need at least 4 grid points");
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] > 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1]))) {
            throw DomainError("tail_index_estimate: grid must be positive and increasing");
        }
    }
    if (s_grid.back() / s_grid.front() < 100.0 * (1.0 - 1e-12)) {
        throw DomainError("tail_index_estimate: grid must span at least two decades");
    }
    TailIndexResult out;
    std::vector<double> x;
    std::vector<double> y;
    for (double s : s_grid) {
        const double t = tail(s);
        if (!(t >= 1e-300)) {
            throw TailUnderflow("tail_index_estimate: tail probability " + fmt(t) + " at s=" + fmt(s) +
                                " is below 1e-300");
        }
        out.s.push_back(s);
        out.tail.push_back(t);
        x.push_back(std::log(s));
        y.push_back(std::log(t));
    }
    const Fit all = least_squares(x, y, 0, x.size());
    const std::size_t half = x.size() / 2;
    const Fit lower = least_squares(x, y, 0, half + 1);
    const Fit upper = least_squares(x, y, half, x.size());
    out.slope = all.slope;
    out.intercept = all.intercept;
    out.curvature = std::fabs(upper.slope - lower.slope);
    out.regularly_varying = out.curvature <= curvature_threshold;
    return out;
}

TailIndexResult tail_index_estimate(const DistributionSpec& spec, const std::vector<double>& s_grid,
                                    double curvature_threshold) {
    return tail_index_estimate([&spec](double s) { return tail_prob(spec, s); }, s_grid, curvature_threshold);
}

}  // namespace chaoslab
