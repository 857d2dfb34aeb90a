#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "chaoslab/distributions.hpp"

namespace chaoslab {

enum class Verdict { Pass, FailDivergent, Inconclusive };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

/// n points geometric between a and b inclusive.
std::vector<double> geometric_grid(double a, double b, std::size_t n);

/// 40 geometric points from 1 to 1e3.
std::vector<double> default_s_multipliers();

struct CqConfig {
    /// c_Z is this quantile of |Z| at every scale.
    double c_level = 0.5;
    /// s-grid as multiples of c_Z; must start at 1 and increase.
    std::vector<double> s_multipliers = default_s_multipliers();
    double beta2_cap = 1e6;
    double beta1_floor = 0.1;
    /// FAIL_DIVERGENT when beta2 grows by more than this factor from the
    /// largest to the smallest scale.
    double growth_factor = 10.0;
    /// FAIL_DIVERGENT when the last per-decade increment of beta2 is at least
    /// this fraction of the previous one (no visible saturation).
    double increment_ratio = 0.9;
    /// Relative change of beta2 treated as flat.
    double flat_tolerance = 1e-6;
};

struct RatioPoint {
    double s = 0.0;
    double ratio = 0.0;
    double stderr_ = 0.0;
    double tail = 0.0;
    double truncated_moment = 0.0;
};

struct ScaleRecord {
    double m = 1.0;
    std::string law;
    double c_z = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta2_stderr = 0.0;
    std::vector<RatioPoint> curve;
};

struct CqReport {
    double q = 0.0;
    std::string family;
    std::vector<ScaleRecord> scales;  // sorted by decreasing m
    double beta1_min = 0.0;
    double beta2_max = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::string diagnostics;
};

/// Condition C_q over the scale family. Families without scales are checked
/// at m = 1. A missing q-th moment yields FAIL_DIVERGENT with the reason.
CqReport check_cq(const ScaleFamily& family, double q, const CqConfig& config = {});

struct CinfEntry {
    std::string law;
    double ess_sup = 0.0;  // ||Z - EZ||_inf
    double sd = 0.0;       // ||Z - EZ||_2
    double ratio = 0.0;
};

struct CinfReport {
    double beta3 = 0.0;  // +infinity when some member is unbounded
    Verdict verdict = Verdict::Inconclusive;
    std::vector<CinfEntry> entries;
    std::string diagnostics;
};

/// beta3 = sup ||Z - EZ||_inf / ||Z - EZ||_2; PASS iff finite.
CinfReport check_cinf(const std::vector<DistributionSpec>& specs);

/// (max(beta2, 1))^{1/q} beta1^{-1/p}, a bound on ||Z||_q / ||Z||_p.
double moment_ratio_bound(double beta1, double beta2, double p, double q);

struct TailIndexResult {
    double slope = 0.0;       // least squares slope of log tail vs log s
    double intercept = 0.0;
    double curvature = 0.0;   // |slope(upper half) - slope(lower half)|
    bool regularly_varying = true;
    std::vector<double> s;
    std::vector<double> tail;
};

/// Slope of log P(|Z| > s) against log s. Steep, bending tails are flagged
/// as not regularly varying. TailUnderflow when a tail value is below 1e-300.
TailIndexResult tail_index_estimate(const DistributionSpec& spec, const std::vector<double>& s_grid,
                                    double curvature_threshold = 0.3);
TailIndexResult tail_index_estimate(const std::function<double(double)>& tail, const std::vector<double>& s_grid,
                                    double curvature_threshold = 0.3);

}  // namespace chaoslab
