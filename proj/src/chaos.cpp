#include "chaoslab/chaos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "chaoslab/errors.hpp"

namespace chaoslab {

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
    return out;
}

// --- TetrahedralPolynomial ----------------------------------------------------------

TetrahedralPolynomial::TetrahedralPolynomial(std::size_t order, std::size_t variables, std::size_t width)
    : TetrahedralPolynomial(order, variables, std::vector<double>(width, 0.0)) {}

TetrahedralPolynomial::TetrahedralPolynomial(std::size_t order, std::size_t variables, std::vector<double> x0)
    : order_(order), variables_(variables), x0_(std::move(x0)) {
    if (order_ < 1) throw DomainError("tetrahedral polynomial: order must be >= 1");
    if (variables_ < 1) throw DomainError("tetrahedral polynomial: variable count must be >= 1");
    if (x0_.empty()) throw DomainError("tetrahedral polynomial: width must be >= 1");
}

void TetrahedralPolynomial::set(MultiIndex idx, std::vector<double> value) {
    if (idx.empty()) throw DomainError("tetrahedral polynomial: empty key; use set_constant");
    if (idx.size() > order_) throw DomainError("tetrahedral polynomial: key longer than the order");
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 1 || idx[i] > variables_) throw DomainError("tetrahedral polynomial: index out of range");
        if (i > 0 && idx[i] <= idx[i - 1]) throw DomainError("tetrahedral polynomial: key not strictly increasing");
    }
    if (value.size() != x0_.size()) throw DimensionMismatch("tetrahedral polynomial: coefficient width differs from T");
    for (double v : value) {
        if (!std::isfinite(v)) throw DomainError("tetrahedral polynomial: coefficients must be finite");
    }
    coeffs_[std::move(idx)] = std::move(value);
}

void TetrahedralPolynomial::set_constant(std::vector<double> x0) {
    if (x0.size() != x0_.size()) throw DimensionMismatch("tetrahedral polynomial: constant width differs from T");
    x0_ = std::move(x0);
}

std::size_t TetrahedralPolynomial::degree() const {
    std::size_t d = 0;
    for (const auto& [key, value] : coeffs_) d = std::max(d, key.size());
    return d;
}

void TetrahedralPolynomial::evaluate_into(std::span<const double> z, std::span<double> out) const {
    if (z.size() != variables_) {
        throw DimensionMismatch("evaluate: z has " + std::to_string(z.size()) + " entries, expected " +
                                std::to_string(variables_));
    }
    std::copy(x0_.begin(), x0_.end(), out.begin());
    for (const auto& [key, value] : coeffs_) {
        double prod = 1.0;
        for (std::size_t i : key) prod *= z[i - 1];
        for (std::size_t t = 0; t < value.size(); ++t) out[t] += value[t] * prod;
    }
}

std::vector<double> TetrahedralPolynomial::evaluate(std::span<const double> z) const {
    std::vector<double> out(x0_.size());
    evaluate_into(z, out);
    return out;
}

TetrahedralPolynomial TetrahedralPolynomial::truncated(std::size_t n) const {
    TetrahedralPolynomial out(order_, variables_, x0_);
    for (const auto& [key, value] : coeffs_) {
        if (key.back() <= n) out.coeffs_.emplace(key, value);
    }
    return out;
}

TetrahedralPolynomial TetrahedralPolynomial::scaled(double lambda) const {
    TetrahedralPolynomial out(*this);
    for (auto& v : out.x0_) v *= lambda;
    for (auto& [key, value] : out.coeffs_) {
        for (auto& v : value) v *= lambda;
    }
    return out;
}

// --- process specs ---------------------------------------------------------------------

DistributionSpec Driver::law_of(std::size_t i) const {
    if (scales.empty()) return base;
    if (i < 1 || i > scales.size()) throw DimensionMismatch("driver: no scale for variable " + std::to_string(i));
    return ScaleFamily{base, scales}.law_at(scales[i - 1]);
}

void ChaosProcessSpec::validate() const {
    if (T.empty()) throw DomainError("chaos process: T must be nonempty");
    if (poly.width() != T.size()) throw DimensionMismatch("chaos process: polynomial width differs from |T|");
    if (!driver.scales.empty() && driver.scales.size() != poly.variables()) {
        throw DimensionMismatch("chaos process: driver scales must list one value per variable");
    }
    for (std::size_t i = 1; i <= (driver.scales.empty() ? 0 : poly.variables()); ++i) (void)driver.law_of(i);
}

std::vector<std::string> ChaosProcessSpec::warnings() const {
    std::vector<std::string> out;
    if (poly.degree() >= 2 && !driver.symmetric()) {
        out.push_back("driver " + describe(driver.base) + " is not symmetric; the order-" +
                      std::to_string(poly.degree()) + " equivalence results assume symmetric variables");
    }
    return out;
}

Matrix sample_paths(const ChaosProcessSpec& spec, std::uint64_t seed, std::size_t n_paths) {
    spec.validate();
    if (n_paths == 0) throw DomainError("sample_paths: n_paths must be >= 1");
    const std::size_t l = spec.poly.variables();
    Matrix out(n_paths, spec.T.size());
    for_each_chunk(n_paths, kChunkSize, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Engine engine = make_engine(seed, 0, chunk);
        std::vector<Sampler> draws;
        if (spec.driver.scales.empty()) {
            draws.emplace_back(spec.driver.base);
        } else {
            for (std::size_t i = 1; i <= l; ++i) draws.emplace_back(spec.driver.law_of(i));
        }
        std::vector<double> z(l);
        for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t i = 0; i < l; ++i) z[i] = draws[draws.size() == 1 ? 0 : i](engine);
            spec.poly.evaluate_into(z, out.row(r));
        }
    });
    return out;
}

// --- integral processes --------------------------------------------------------------------

void IntegralProcessGrid::validate() const {
    if (T.empty()) throw DomainError("integral grid: T must be nonempty");
    if (grid.size() < 2 || grid.front() != 0.0) throw DomainError("integral grid: need 0 = s_0 < ... < s_M");
    for (std::size_t j = 1; j < grid.size(); ++j) {
        if (!(grid[j] > grid[j - 1]) || !std::isfinite(grid[j])) {
            throw DomainError("integral grid: grid must be strictly increasing and finite");
        }
    }
    if (kernel.size() != T.size()) throw DimensionMismatch("integral grid: kernel needs one row per t");
    for (const auto& row : kernel) {
        if (row.size() != grid.size() - 1) throw DimensionMismatch("integral grid: kernel row needs one value per cell");
        for (double v : row) {
            if (!std::isfinite(v)) throw DomainError("integral grid: kernel must be finite");
        }
    }
}

IntegralProcessGrid make_integral_grid(std::vector<std::string> labels, const std::vector<double>& t_values,
                                       std::vector<double> grid, const std::function<double(double, double)>& f,
                                       DistributionSpec family) {
    if (labels.size() != t_values.size()) throw DimensionMismatch("integral grid: labels and t values differ");
    IntegralProcessGrid out{std::move(labels), std::move(grid), {}, std::move(family)};
    out.kernel.resize(t_values.size());
    for (std::size_t k = 0; k < t_values.size(); ++k) {
        for (std::size_t j = 0; j + 1 < out.grid.size(); ++j) out.kernel[k].push_back(f(t_values[k], out.grid[j]));
    }
    out.validate();
    return out;
}

ChaosProcessSpec integral_process_chaos(const IntegralProcessGrid& grid) {
    grid.validate();
    const std::size_t cells = grid.grid.size() - 1;
    TetrahedralPolynomial poly(1, cells, grid.T.size());
    std::vector<double> widths(cells);
    for (std::size_t j = 0; j < cells; ++j) {
        widths[j] = grid.grid[j + 1] - grid.grid[j];
        std::vector<double> column(grid.T.size());
        bool any = false;
        for (std::size_t t = 0; t < grid.T.size(); ++t) {
            column[t] = grid.kernel[t][j];
            any = any || column[t] != 0.0;
        }
        if (any) poly.set({j + 1}, std::move(column));
    }
    return {grid.T, std::move(poly), Driver{grid.family, std::move(widths)}};
}

Matrix discretize_integral_process(const IntegralProcessGrid& grid, std::uint64_t seed, std::size_t n_paths) {
    return sample_paths(integral_process_chaos(grid), seed, n_paths);
}

// --- Rademacher CLT ---------------------------------------------------------------------------

std::vector<double> rademacher_clt_block(std::size_t j, std::size_t k, Engine& engine) {
    if (j < 1 || k < 1) throw DomainError("rademacher_clt_block: j and k must be >= 1");
    std::vector<double> out(k);
    const double norm = 1.0 / std::sqrt(static_cast<double>(j));
    for (std::size_t c = 0; c < k; ++c) {
        // Sum of j signs = 2 * (#ones) - j over j random bits.
        std::int64_t ones = 0;
        std::size_t left = j;
        while (left >= 64) {
            ones += std::popcount(engine());
            left -= 64;
        }
        if (left > 0) ones += std::popcount(engine() >> (64 - left));
        out[c] = static_cast<double>(2 * ones - static_cast<std::int64_t>(j)) * norm;
    }
    return out;
}

std::vector<double> rademacher_clt_block(std::size_t j, std::size_t k, std::uint64_t seed) {
    Engine engine = make_engine(seed, 0, 0);
    return rademacher_clt_block(j, k, engine);
}

Matrix rademacher_clt_sample(std::size_t j, std::size_t k, std::uint64_t seed, std::size_t n) {
    if (n == 0) throw DomainError("rademacher_clt_sample: n must be >= 1");
    Matrix out(n, k);
    for_each_chunk(n, kChunkSize, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Engine engine = make_engine(seed, 0, chunk);
        for (std::size_t r = begin; r < end; ++r) {
            const auto block = rademacher_clt_block(j, k, engine);
            std::copy(block.begin(), block.end(), out.row(r).begin());
        }
    });
    return out;
}

// --- truncation ------------------------------------------------------------------------------

std::vector<TruncationRow> truncation_diagnostic(const ChaosProcessSpec& spec, const PseudoSeminormSpec& seminorm,
                                                 std::uint64_t seed, std::size_t n_paths,
                                                 const std::vector<std::size_t>& prefix_sizes) {
    spec.validate();
    if (seminorm.dim() != spec.T.size()) throw DimensionMismatch("truncation_diagnostic: seminorm dimension differs from |T|");
    if (n_paths == 0) throw DomainError("truncation_diagnostic: n_paths must be >= 1");
    for (std::size_t i = 0; i < prefix_sizes.size(); ++i) {
        if (prefix_sizes[i] > spec.poly.variables()) throw DomainError("truncation_diagnostic: prefix exceeds l");
        if (i > 0 && prefix_sizes[i] <= prefix_sizes[i - 1]) {
            throw DomainError("truncation_diagnostic: prefix sizes must be increasing");
        }
    }
    // The remainder X - X^(n) keeps the terms with some index above n.
    std::vector<TetrahedralPolynomial> remainders;
    for (std::size_t n : prefix_sizes) {
        TetrahedralPolynomial rem(spec.poly.order(), spec.poly.variables(), spec.T.size());
        for (const auto& [key, value] : spec.poly.coefficients()) {
            if (key.back() > n) rem.set(key, value);
        }
        remainders.push_back(std::move(rem));
    }
    const std::size_t m = prefix_sizes.size();
    const std::size_t chunks = (n_paths + kChunkSize - 1) / kChunkSize;
    std::vector<std::vector<double>> sums(chunks, std::vector<double>(m, 0.0));
    std::vector<std::vector<double>> squares(chunks, std::vector<double>(m, 0.0));
    const std::size_t l = spec.poly.variables();
    for_each_chunk(n_paths, kChunkSize, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Engine engine = make_engine(seed, 0, chunk);
        std::vector<Sampler> draws;
        if (spec.driver.scales.empty()) {
            draws.emplace_back(spec.driver.base);
        } else {
            for (std::size_t i = 1; i <= l; ++i) draws.emplace_back(spec.driver.law_of(i));
        }
        std::vector<double> z(l);
        Path path(spec.T.size());
        for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t i = 0; i < l; ++i) z[i] = draws[draws.size() == 1 ? 0 : i](engine);
            for (std::size_t k = 0; k < m; ++k) {
                remainders[k].evaluate_into(z, path);
                const double v = eval_seminorm(seminorm, path);
                sums[chunk][k] += v;
                squares[chunk][k] += v * v;
            }
        }
    });
    std::vector<TruncationRow> rows;
    const double n = static_cast<double>(n_paths);
    for (std::size_t k = 0; k < m; ++k) {
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t c = 0; c < chunks; ++c) {
            s += sums[c][k];
            s2 += squares[c][k];
        }
        const double mu = s / n;
        const double var = n > 1.0 ? std::max(0.0, (s2 - n * mu * mu) / (n - 1.0)) : 0.0;
        rows.push_back({prefix_sizes[k], mu, std::sqrt(var / n)});
    }
    return rows;
}

}  // namespace chaoslab
