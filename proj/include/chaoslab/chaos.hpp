#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chaoslab/distributions.hpp"
#include "chaoslab/random.hpp"
#include "chaoslab/seminorms.hpp"

namespace chaoslab {

/// Row-major n_paths x |T| sample matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Multi-index: strictly increasing 1-based variable indices.
using MultiIndex = std::vector<std::size_t>;

/// x0 + sum_{k<=d} sum_{i1<...<ik<=l} x_{i1..ik} z_{i1}...z_{ik}, vector valued
/// over T (width = |T|).
class TetrahedralPolynomial {
public:
    TetrahedralPolynomial(std::size_t order, std::size_t variables, std::size_t width = 1);
    TetrahedralPolynomial(std::size_t order, std::size_t variables, std::vector<double> x0);

    /// Sets (replaces) the coefficient of a multi-index. DomainError for keys
    /// that are not strictly increasing, longer than the order, out of range,
    /// or values of the wrong width.
    void set(MultiIndex idx, std::vector<double> value);
    void set(MultiIndex idx, double value) { set(std::move(idx), std::vector<double>{value}); }
    void set_constant(std::vector<double> x0);

    std::size_t order() const noexcept { return order_; }
    std::size_t variables() const noexcept { return variables_; }
    std::size_t width() const noexcept { return x0_.size(); }
    /// Longest key present (0 for constants).
    std::size_t degree() const;
    const std::vector<double>& constant() const noexcept { return x0_; }
    const std::map<MultiIndex, std::vector<double>>& coefficients() const noexcept { return coeffs_; }

    /// Value at z; terms summed in lexicographic key order after x0.
    std::vector<double> evaluate(std::span<const double> z) const;
    void evaluate_into(std::span<const double> z, std::span<double> out) const;

    /// Keeps only the terms whose indices are all <= n (the constant is kept).
    TetrahedralPolynomial truncated(std::size_t n) const;
    /// All coefficients and the constant multiplied by lambda.
    TetrahedralPolynomial scaled(double lambda) const;

private:
    std::size_t order_;
    std::size_t variables_;
    std::vector<double> x0_;
    std::map<MultiIndex, std::vector<double>> coeffs_;
};

/// Law of the driving variables Z_1..Z_l: i.i.d. `base`, or with `scales`,
/// Z_i ~ law_at(scales[i-1]) of the scale family generated by `base`.
struct Driver {
    DistributionSpec base;
    std::vector<double> scales;

    DistributionSpec law_of(std::size_t i) const;  // 1-based
    bool symmetric() const { return base.symmetric(); }
};

struct ChaosProcessSpec {
    std::vector<std::string> T;
    TetrahedralPolynomial poly;
    Driver driver;

    /// Throws DomainError / DimensionMismatch on inconsistent pieces.
    void validate() const;
    /// Hypothesis notes, e.g. a non-symmetric driver with degree >= 2.
    std::vector<std::string> warnings() const;
};

/// One row per i.i.d. draw of (Z_1..Z_l); deterministic in (spec, seed, n_paths)
/// for any worker count.
Matrix sample_paths(const ChaosProcessSpec& spec, std::uint64_t seed, std::size_t n_paths);

/// Time grid 0 = s_0 < ... < s_M, kernel[t][j] = f(t, s_j) for cell j, and the
/// scale family whose law_at(s_{j+1} - s_j) drives cell j.
struct IntegralProcessGrid {
    std::vector<std::string> T;
    std::vector<double> grid;
    std::vector<std::vector<double>> kernel;
    DistributionSpec family;

    void validate() const;
};

/// Kernel f(t_k, s_j) evaluated at the left endpoint of every cell.
IntegralProcessGrid make_integral_grid(std::vector<std::string> labels, const std::vector<double>& t_values,
                                       std::vector<double> grid, const std::function<double(double, double)>& f,
                                       DistributionSpec family);

/// The order-1 tetrahedral form of the discretized integral process.
ChaosProcessSpec integral_process_chaos(const IntegralProcessGrid& grid);

Matrix discretize_integral_process(const IntegralProcessGrid& grid, std::uint64_t seed, std::size_t n_paths);

/// U_j = j^{-1/2} (sum_i Z_{1,i}, ..., sum_i Z_{k,i}) from j*k Rademacher signs.
std::vector<double> rademacher_clt_block(std::size_t j, std::size_t k, Engine& engine);
std::vector<double> rademacher_clt_block(std::size_t j, std::size_t k, std::uint64_t seed);
/// n independent blocks, one per row.
Matrix rademacher_clt_sample(std::size_t j, std::size_t k, std::uint64_t seed, std::size_t n);

struct TruncationRow {
    std::size_t prefix = 0;
    double distance = 0.0;  // Monte Carlo mean of N(X - X^(n))
    double stderr_ = 0.0;
};

/// E N(X - X^(n)) for each prefix n, with common draws across prefixes.
std::vector<TruncationRow> truncation_diagnostic(const ChaosProcessSpec& spec, const PseudoSeminormSpec& seminorm,
                                                 std::uint64_t seed, std::size_t n_paths,
                                                 const std::vector<std::size_t>& prefix_sizes);

}  // namespace chaoslab
