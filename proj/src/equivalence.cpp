#include "chaoslab/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chaoslab/cq_checker.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/random.hpp"

namespace chaoslab {
namespace {

constexpr std::uint64_t kBootstrapStream = 0xB007;

__extension__ typedef unsigned __int128 u128;

/// Multiply-shift map of a 64-bit draw onto [0, n).
std::size_t draw_index(Engine& e, std::size_t n) {
    return static_cast<std::size_t>((static_cast<u128>(e()) * n) >> 64);
}

double max_abs(std::span<const double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::fabs(x));
    return m;
}

std::vector<double> scaled_powers(std::span<const double> xs, double scale, double p) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::pow(std::fabs(xs[i]) / scale, p);
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Resample means of one or two columns with shared indices.
void bootstrap_means(const std::vector<double>& a, const std::vector<double>* b, std::uint64_t seed,
                     std::size_t resamples, std::vector<double>& out_a, std::vector<double>& out_b) {
    out_a.assign(resamples, 0.0);
    out_b.assign(resamples, 0.0);
    const std::size_t n = a.size();
    for_each_chunk(resamples, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            Engine e = make_engine(seed, kBootstrapStream, k);
            double sa = 0.0;
            double sb = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = draw_index(e, n);
                sa += a[j];
                if (b != nullptr) sb += (*b)[j];
            }
            out_a[k] = sa / static_cast<double>(n);
            out_b[k] = sb / static_cast<double>(n);
        }
    });
}

}  // namespace

LpEstimate empirical_lp_norm(std::span<const double> samples, double p, std::uint64_t seed, std::size_t resamples) {
    if (samples.empty()) throw EmptySample("empirical_lp_norm: no samples");
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("empirical_lp_norm: p must be positive");
    const double scale = max_abs(samples);
    if (scale == 0.0) return {0.0, 0.0};
    if (!std::isfinite(scale)) throw DomainError("empirical_lp_norm: samples must be finite");
    const auto pw = scaled_powers(samples, scale, p);
    LpEstimate out{scale * std::pow(mean_of(pw), 1.0 / p), 0.0};
    if (resamples > 1) {
        std::vector<double> ma;
        std::vector<double> unused;
        bootstrap_means(pw, nullptr, seed, resamples, ma, unused);
        for (auto& m : ma) m = scale * std::pow(m, 1.0 / p);
        out.stderr_ = sample_sd(ma);
    }
    return out;
}

LpRatio lp_ratio_delta(std::span<const double> samples, double q, double p) {
    if (samples.empty()) throw EmptySample("lp_ratio_delta: no samples");
    if (!(p > 0.0 && q > 0.0)) throw DomainError("lp_ratio_delta: exponents must be positive");
    const double scale = max_abs(samples);
    if (scale == 0.0) return {1.0, 0.0};
    const auto a = scaled_powers(samples, scale, q);
    const auto b = scaled_powers(samples, scale, p);
    const double n = static_cast<double>(samples.size());
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double vaa = 0.0;
    double vbb = 0.0;
    double vab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        vaa += (a[i] - ma) * (a[i] - ma);
        vbb += (b[i] - mb) * (b[i] - mb);
        vab += (a[i] - ma) * (b[i] - mb);
    }
    vaa /= n - 1.0;
    vbb /= n - 1.0;
    vab /= n - 1.0;
    // log R = log(ma)/q - log(mb)/p
    const double ga = 1.0 / (q * ma);
    const double gb = -1.0 / (p * mb);
    const double var = (ga * ga * vaa + gb * gb * vbb + 2.0 * ga * gb * vab) / n;
    return {std::pow(ma, 1.0 / q) / std::pow(mb, 1.0 / p), std::sqrt(std::max(var, 0.0))};
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::CqFinite: return "cq_finite";
        case Regime::Cinfinity: return "cinfinity";
        case Regime::GaussianChaos: return "gaussian_chaos";
    }
    return "cq_finite";
}

Regime regime_from_string(std::string_view s) {
    if (s == "cq_finite") return Regime::CqFinite;
    if (s == "cinfinity") return Regime::Cinfinity;
    if (s == "gaussian_chaos") return Regime::GaussianChaos;
    throw DomainError("unknown regime '" + std::string(s) + "'");
}

std::optional<double> equivalence_constant(double p, double r, int d, double beta3, Regime regime) {
    if (!(p > 0.0 && p < r) || !std::isfinite(r)) throw DomainError("equivalence_constant: need 0 < p < r < inf");
    if (d < 1) throw DomainError("equivalence_constant: d must be >= 1");
    const double dd = static_cast<double>(d);
    switch (regime) {
        case Regime::Cinfinity:
            if (p < 2.0) throw DomainError("equivalence_constant: the bounded-variable constant needs p >= 2");
            if (!(beta3 > 0.0) || !std::isfinite(beta3)) {
                throw DomainError("equivalence_constant: beta3 must be positive and finite");
            }
            return std::pow(2.0, dd * dd / 2.0 + 2.0 * dd) * std::pow(beta3, 2.0 * dd) * std::pow(r, dd / 2.0);
        case Regime::GaussianChaos:
            if (!(p > 1.0)) throw DomainError("equivalence_constant: the Gaussian chaos constant needs p > 1");
            return std::pow(2.0, dd * dd / 2.0 + dd) * std::pow((r - 1.0) / (p - 1.0), dd / 2.0);
        case Regime::CqFinite:
            return std::nullopt;
    }
    return std::nullopt;
}

EquivalenceReport equivalence_from_values(std::span<const double> values, int d, const EquivalenceConfig& config,
                                          std::uint64_t seed) {
    if (values.empty()) throw EmptySample("verify_equivalence: no samples");
    EquivalenceReport rep;
    rep.p = config.p;
    rep.r = config.r;
    rep.d = d;
    rep.regime = config.regime;
    rep.beta3 = config.beta3;
    rep.n_paths = values.size();
    rep.k = equivalence_constant(config.p, config.r, d, config.beta3.value_or(1.0), config.regime);
    if (config.regime == Regime::Cinfinity) {
        rep.notes.emplace_back("beta in A_d beta^{2d} r^{d/2} is read as beta3, the bounded-variable constant");
    }
    if (!rep.k) rep.notes.emplace_back("finite-q regime: only existence of the constant is asserted");

    const double scale = max_abs(values);
    if (!std::isfinite(scale)) {
        rep.notes.emplace_back("N(X) is infinite on some path");
        rep.ratio = std::numeric_limits<double>::infinity();
        return rep;
    }
    if (scale == 0.0) {
        rep.ratio = 1.0;
        rep.notes.emplace_back("N(X) = 0 on every path; ratio set to 1");
        if (rep.k) rep.margin = *rep.k - rep.ratio;
        rep.pass = !rep.k || rep.ratio <= *rep.k;
        return rep;
    }
    const auto ap = scaled_powers(values, scale, config.p);
    const auto ar = scaled_powers(values, scale, config.r);
    const double mp = mean_of(ap);
    const double mr = mean_of(ar);
    rep.norm_p.estimate = scale * std::pow(mp, 1.0 / config.p);
    rep.norm_r.estimate = scale * std::pow(mr, 1.0 / config.r);
    rep.ratio = std::pow(mr, 1.0 / config.r) / std::pow(mp, 1.0 / config.p);
    if (config.resamples > 1) {
        std::vector<double> bp;
        std::vector<double> br;
        bootstrap_means(ap, &ar, seed, config.resamples, bp, br);
        std::vector<double> np(bp.size());
        std::vector<double> nr(bp.size());
        std::vector<double> ratios(bp.size());
        for (std::size_t k = 0; k < bp.size(); ++k) {
            np[k] = scale * std::pow(bp[k], 1.0 / config.p);
            nr[k] = scale * std::pow(br[k], 1.0 / config.r);
            ratios[k] = nr[k] / np[k];
        }
        rep.norm_p.stderr_ = sample_sd(np);
        rep.norm_r.stderr_ = sample_sd(nr);
        rep.ratio_stderr = sample_sd(ratios);
    }
    if (rep.k) {
        rep.margin = *rep.k - rep.ratio;
        rep.pass = rep.ratio + 3.0 * rep.ratio_stderr <= *rep.k;
    } else {
        rep.pass = std::isfinite(rep.ratio);
    }
    return rep;
}

EquivalenceReport verify_equivalence(const ChaosProcessSpec& spec, const PseudoSeminormSpec& seminorm,
                                     const EquivalenceConfig& config, std::uint64_t seed) {
    spec.validate();
    if (seminorm.dim() != spec.T.size()) throw DimensionMismatch("verify_equivalence: seminorm dimension differs from |T|");
    EquivalenceConfig resolved = config;
    if (config.regime == Regime::Cinfinity && !config.beta3) {
        std::vector<DistributionSpec> laws;
        if (spec.driver.scales.empty()) {
            laws.push_back(spec.driver.base);
        } else {
            for (std::size_t i = 1; i <= spec.poly.variables(); ++i) laws.push_back(spec.driver.law_of(i));
        }
        const CinfReport cinf = check_cinf(laws);
        if (cinf.verdict != Verdict::Pass) {
            throw DomainError("verify_equivalence: driver is unbounded, so the bounded-variable constant does not apply");
        }
        resolved.beta3 = cinf.beta3;
    }
    const Matrix paths = sample_paths(spec, seed, config.n_paths);
    std::vector<double> values(paths.rows());
    Path row(paths.cols());
    for (std::size_t i = 0; i < paths.rows(); ++i) {
        const auto src = paths.row(i);
        std::copy(src.begin(), src.end(), row.begin());
        values[i] = eval_seminorm(seminorm, row);
    }
    auto rep = equivalence_from_values(values, static_cast<int>(spec.poly.order()), resolved, derive_seed(seed, 1));
    for (auto& w : spec.warnings()) rep.notes.push_back(std::move(w));
    return rep;
}

double exp_integrability_threshold(int d, double beta3, double norm2) {
    if (d < 1) throw DomainError("exp_integrability_threshold: d must be >= 1");
    if (!(beta3 > 0.0) || !std::isfinite(beta3)) throw DomainError("exp_integrability_threshold: beta3 must be positive");
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw DomainError("exp_integrability_threshold: norm2 must be positive");
    const double dd = static_cast<double>(d);
    return dd / (std::numbers::e * std::pow(2.0, dd + 5.0) * std::pow(beta3, 4.0) * std::pow(norm2, 2.0 / dd));
}

SeriesBound exp_moment_series_bound(double epsilon, int d, double beta3, const std::vector<double>& norms,
                                    double norm2) {
    if (!(epsilon > 0.0)) throw DomainError("exp_moment_series_bound: epsilon must be positive");
    if (d < 1) throw DomainError("exp_moment_series_bound: d must be >= 1");
    if (norms.size() != static_cast<std::size_t>(d)) {
        throw DimensionMismatch("exp_moment_series_bound: need ||N(X)||_{2k/d} for k = 1..d");
    }
    const double dd = static_cast<double>(d);
    const double a = epsilon * std::pow(2.0, dd + 5.0) * std::pow(beta3, 4.0) * std::pow(norm2, 2.0 / dd) / dd;
    SeriesBound out;
    // Successive terms of a^k k^k / k! grow by a (1 + 1/k)^k, which tends to a e.
    const double q = a * std::numbers::e;
    if (q >= 1.0) {
        out.diverges = true;
        return out;
    }
    double sum = 1.0;
    for (int k = 1; k <= d; ++k) sum += std::pow(norms[static_cast<std::size_t>(k - 1)], 2.0 * k / dd);
    const double log_a = std::log(a);
    for (std::size_t k = static_cast<std::size_t>(d) + 1;; ++k) {
        const double kk = static_cast<double>(k);
        const double term = std::exp(kk * log_a + kk * std::log(kk) - std::lgamma(kk + 1.0));
        sum += term;
        out.terms = k - static_cast<std::size_t>(d);
        // Remaining terms are bounded by a geometric series of ratio q.
        if (term * q / (1.0 - q) <= 1e-10 * sum || out.terms > 100000000) break;
    }
    out.value = sum;
    return out;
}

}  // namespace chaoslab
