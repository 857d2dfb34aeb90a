#include "chaoslab/polybound.hpp"

#include <cmath>
#include <sstream>

#include "chaoslab/errors.hpp"
#include "chaoslab/random.hpp"

namespace chaoslab {

void PolynomialCurve::validate() const {
    if (d < 1) throw DomainError("polynomial curve: d must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("polynomial curve: epsilon must lie in (0, 1)");
    if (coeffs.size() != static_cast<std::size_t>(d) + 1) {
        throw DimensionMismatch("polynomial curve: need d + 1 coefficient vectors");
    }
    for (const auto& c : coeffs) {
        if (c.size() != coeffs.front().size() || c.empty()) {
            throw DimensionMismatch("polynomial curve: coefficient vectors differ in width");
        }
        for (double v : c) {
            if (!std::isfinite(v)) throw DomainError("polynomial curve: coefficients must be finite");
        }
    }
}

Path PolynomialCurve::at(double lambda) const {
    // Horner, highest degree first.
    Path out(coeffs.back());
    for (int k = d - 1; k >= 0; --k) {
        const auto& c = coeffs[static_cast<std::size_t>(k)];
        for (std::size_t t = 0; t < out.size(); ++t) out[t] = out[t] * lambda + c[t];
    }
    return out;
}

Path PolynomialCurve::coefficient_sum() const {
    Path out(width(), 0.0);
    for (const auto& c : coeffs) {
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += c[t];
    }
    return out;
}

double grid_margin(int d, double epsilon, std::size_t grid_size) {
    if (grid_size < 101 || grid_size % 2 == 0) throw DomainError("curve grid: grid_size must be odd and >= 101");
    const double h = 2.0 * epsilon / static_cast<double>(grid_size - 1);
    const double x = static_cast<double>(d * d) * h / epsilon;
    if (x / 2.0 >= 1.0) throw DomainError("curve grid: grid too coarse for the derivative bound");
    return std::max(1.0 + x, 1.0 / (1.0 - x / 2.0));
}

CurveSup curve_sup(const PolynomialCurve& curve, const PseudoSeminormSpec& seminorm, std::size_t grid_size) {
    curve.validate();
    if (seminorm.dim() != curve.width()) throw DimensionMismatch("curve_sup: seminorm dimension differs from the curve");
    CurveSup out;
    out.margin = grid_margin(curve.d, curve.epsilon, grid_size);
    const auto half = static_cast<std::ptrdiff_t>(grid_size / 2);
    for (std::ptrdiff_t i = -half; i <= half; ++i) {
        // Exact endpoints and zero: lambda = eps * i / half.
        const double lambda = curve.epsilon * static_cast<double>(i) / static_cast<double>(half);
        const double v = eval_seminorm(seminorm, curve.at(lambda));
        if (v > out.M) {
            out.M = v;
            out.lambda = lambda;
        }
    }
    return out;
}

GenargCheck verify_genarg(const PolynomialCurve& curve, const PseudoSeminormSpec& seminorm, std::size_t grid_size) {
    const CurveSup sup = curve_sup(curve, seminorm, grid_size);
    const double d = static_cast<double>(curve.d);
    GenargCheck out;
    out.M = sup.M;
    out.margin = sup.margin;
    out.lhs = eval_seminorm(seminorm, curve.coefficient_sum());
    out.rhs = std::pow(2.0, d * d / 2.0 + d) * std::pow(curve.epsilon, -d) * sup.M * sup.margin;
    out.pass = out.lhs <= out.rhs;
    return out;
}

GenargCheck leading_coeff_bound_check(const PolynomialCurve& curve, const PseudoSeminormSpec& seminorm,
                                      std::size_t grid_size) {
    const CurveSup sup = curve_sup(curve, seminorm, grid_size);
    const double d = static_cast<double>(curve.d);
    GenargCheck out;
    out.M = sup.M;
    out.margin = sup.margin;
    out.lhs = eval_seminorm(seminorm, curve.coeffs.back()) * std::pow(curve.epsilon, d);
    out.rhs = std::pow(2.0, d) * sup.M * sup.margin;
    out.pass = out.lhs <= out.rhs;
    return out;
}

double induction_factor(int d) {
    const double dd = static_cast<double>(d);
    return std::pow(2.0, -dd * dd / 2.0) + std::pow(2.0, -0.5 - dd) + std::pow(2.0, -0.5);
}

PolynomialCurve chebyshev_curve(int d, double epsilon) {
    if (d < 1) throw DomainError("chebyshev_curve: d must be >= 1");
    // T_0 = 1, T_1 = x, T_{n+1} = 2x T_n - T_{n-1}, in the monomial basis.
    std::vector<double> prev{1.0};
    std::vector<double> cur{0.0, 1.0};
    for (int n = 1; n < d; ++n) {
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t k = 0; k < cur.size(); ++k) next[k + 1] += 2.0 * cur[k];
        for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= prev[k];
        prev = std::move(cur);
        cur = std::move(next);
    }
    PolynomialCurve out;
    out.d = d;
    out.epsilon = epsilon;
    for (std::size_t k = 0; k < cur.size(); ++k) {
        out.coeffs.push_back({cur[k] / std::pow(epsilon, static_cast<double>(k))});
    }
    out.validate();
    return out;
}

CorpusResult run_genarg_corpus(const CorpusConfig& config, std::uint64_t seed) {
    if (config.n == 0) throw DomainError("genarg corpus: n must be >= 1");
    if (config.dmax < 1) throw DomainError("genarg corpus: dmax must be >= 1");
    if (!(config.eps_min > 0.0 && config.eps_min < config.eps_max && config.eps_max < 1.0)) {
        throw DomainError("genarg corpus: need 0 < eps_min < eps_max < 1");
    }
    static constexpr double kPowers[] = {1.0, 1.5, 2.0, 3.0};
    CorpusResult result;
    result.rows.resize(config.n);
    for_each_chunk(config.n, 64, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Engine engine = make_engine(seed, 0, chunk);
        std::uniform_int_distribution<int> degree(1, config.dmax);
        std::uniform_real_distribution<double> eps(config.eps_min, config.eps_max);
        std::uniform_int_distribution<std::size_t> power(0, 3);
        std::normal_distribution<double> normal;
        for (std::size_t i = begin; i < end; ++i) {
            CorpusRow row;
            row.index = i;
            PolynomialCurve curve;
            curve.d = degree(engine);
            curve.epsilon = eps(engine);
            for (int k = 0; k <= curve.d; ++k) {
                std::vector<double> c(config.dim);
                for (auto& v : c) v = normal(engine);
                curve.coeffs.push_back(std::move(c));
            }
            const double p = kPowers[power(engine)];
            const bool use_sup = i % 2 == 0;
            const PseudoSeminormSpec seminorm = use_sup ? PseudoSeminormSpec::sup(config.dim)
                                                        : PseudoSeminormSpec::dyadic_p_variation(config.dim, p);
            std::ostringstream name;
            if (use_sup) {
                name << "sup";
            } else {
                name << "p_variation(" << p << ")";
            }
            row.d = curve.d;
            row.epsilon = curve.epsilon;
            row.seminorm = name.str();
            row.genarg = verify_genarg(curve, seminorm, config.grid_size);
            row.leading = leading_coeff_bound_check(curve, seminorm, config.grid_size);
            result.rows[i] = std::move(row);
        }
    });
    for (const auto& row : result.rows) {
        result.genarg_pass += row.genarg.pass ? 1 : 0;
        result.leading_pass += row.leading.pass ? 1 : 0;
    }
    return result;
}

}  // namespace chaoslab
