#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaoslab/seminorms.hpp"

namespace chaoslab {

/// lambda -> sum_{k=0}^d lambda^k x_k on [-epsilon, epsilon], x_k over T.
struct PolynomialCurve {
    int d = 1;
    double epsilon = 0.5;
    std::vector<std::vector<double>> coeffs;  // d + 1 vectors of equal width

    void validate() const;
    std::size_t width() const { return coeffs.empty() ? 0 : coeffs.front().size(); }
    Path at(double lambda) const;
    /// x_0 + ... + x_d.
    Path coefficient_sum() const;
};

/// Grid-to-continuum factor for a degree-d curve sampled with step h on
/// [-eps, eps]: max(1 + d^2 h / eps, 1 / (1 - d^2 h / (2 eps))), from Markov's
/// derivative bound applied to every functional of the curve.
double grid_margin(int d, double epsilon, std::size_t grid_size);

struct CurveSup {
    double M = 0.0;        // max of N over the lambda grid
    double lambda = 0.0;   // where it is attained
    double margin = 1.0;   // true sup <= M * margin
};

/// grid_size must be odd and >= 101.
CurveSup curve_sup(const PolynomialCurve& curve, const PseudoSeminormSpec& seminorm, std::size_t grid_size);

struct GenargCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double M = 0.0;
    double margin = 1.0;
    bool pass = false;
};

/// lhs = N(sum x_k), rhs = 2^{d^2/2+d} eps^{-d} M margin.
GenargCheck verify_genarg(const PolynomialCurve& curve, const PseudoSeminormSpec& seminorm, std::size_t grid_size);

/// lhs = N(x_d) eps^d, rhs = 2^d M margin.
GenargCheck leading_coeff_bound_check(const PolynomialCurve& curve, const PseudoSeminormSpec& seminorm,
                                      std::size_t grid_size);

/// 2^{-d^2/2} + 2^{-1/2-d} + 2^{-1/2}; at most 1 for d >= 3.
double induction_factor(int d);

/// Scalar curve T_d(lambda / eps), whose sup on [-eps, eps] is 1.
PolynomialCurve chebyshev_curve(int d, double epsilon);

struct CorpusConfig {
    std::size_t n = 1000;
    int dmax = 4;
    std::size_t dim = 8;
    double eps_min = 0.1;
    double eps_max = 0.99;
    std::size_t grid_size = 1001;
};

struct CorpusRow {
    std::size_t index = 0;
    int d = 0;
    double epsilon = 0.0;
    std::string seminorm;  // "sup" or "p_variation(p)"
    GenargCheck genarg;
    GenargCheck leading;
};

struct CorpusResult {
    std::vector<CorpusRow> rows;
    std::size_t genarg_pass = 0;
    std::size_t leading_pass = 0;
};

/// Seeded random curves: d uniform in 1..dmax, eps uniform in (eps_min, eps_max),
/// standard normal coefficients over T, alternating sup and dyadic p-variation.
CorpusResult run_genarg_corpus(const CorpusConfig& config, std::uint64_t seed);

}  // namespace chaoslab
