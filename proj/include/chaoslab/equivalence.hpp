#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaoslab/chaos.hpp"
#include "chaoslab/seminorms.hpp"

namespace chaoslab {

struct LpEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

inline constexpr std::size_t kBootstrapResamples = 200;

/// (mean |x|^p)^{1/p} with a nonparametric bootstrap standard error.
LpEstimate empirical_lp_norm(std::span<const double> samples, double p, std::uint64_t seed,
                             std::size_t resamples = kBootstrapResamples);

/// ||x||_q / ||x||_p with a delta-method relative standard error. Cheap
/// alternative to the bootstrap for very large samples.
struct LpRatio {
    double ratio = 0.0;
    double rel_stderr = 0.0;
};
LpRatio lp_ratio_delta(std::span<const double> samples, double q, double p);

enum class Regime { CqFinite, Cinfinity, GaussianChaos };

std::string_view to_string(Regime r);
Regime regime_from_string(std::string_view s);

/// Cinfinity: 2^{d^2/2+2d} beta3^{2d} r^{d/2} (p >= 2).
/// GaussianChaos: 2^{d^2/2+d} ((r-1)/(p-1))^{d/2} (p > 1).
/// CqFinite: no explicit constant exists; returns std::nullopt.
std::optional<double> equivalence_constant(double p, double r, int d, double beta3, Regime regime);

struct EquivalenceConfig {
    double p = 2.0;
    double r = 4.0;
    Regime regime = Regime::GaussianChaos;
    /// beta3 for the Cinfinity regime; computed from the driver laws when unset.
    std::optional<double> beta3;
    std::size_t n_paths = 100000;
    std::size_t resamples = kBootstrapResamples;
};

struct EquivalenceReport {
    double p = 0.0;
    double r = 0.0;
    int d = 0;
    Regime regime = Regime::GaussianChaos;
    std::optional<double> beta3;
    std::optional<double> k;  // nullopt: only finiteness is asserted
    LpEstimate norm_p;
    LpEstimate norm_r;
    double ratio = 1.0;
    double ratio_stderr = 0.0;
    std::optional<double> margin;  // k - ratio
    bool pass = false;
    std::size_t n_paths = 0;
    std::vector<std::string> notes;
};

/// Samples N(X) and compares ||N(X)||_r / ||N(X)||_p with k; pass iff the
/// ratio plus three bootstrap standard errors is at most k.
EquivalenceReport verify_equivalence(const ChaosProcessSpec& spec, const PseudoSeminormSpec& seminorm,
                                     const EquivalenceConfig& config, std::uint64_t seed);

/// Same comparison on precomputed values of N(X).
EquivalenceReport equivalence_from_values(std::span<const double> values, int d, const EquivalenceConfig& config,
                                          std::uint64_t seed);

/// d / (e 2^{d+5} beta3^4 norm2^{2/d}).
double exp_integrability_threshold(int d, double beta3, double norm2);

struct SeriesBound {
    bool diverges = false;
    double value = 0.0;
    std::size_t terms = 0;
};

/// 1 + sum_{k<=d} ||N||_{2k/d}^{2k/d} + sum_{k>d} a^k k^k / k!, a = eps 2^{d+5}
/// beta3^4 norm2^{2/d} / d. `norms` holds ||N||_{2k/d} for k = 1..d.
SeriesBound exp_moment_series_bound(double epsilon, int d, double beta3, const std::vector<double>& norms,
                                    double norm2);

}  // namespace chaoslab
