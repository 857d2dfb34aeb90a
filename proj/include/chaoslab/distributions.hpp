#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chaoslab/random.hpp"

namespace chaoslab {

struct Gaussian {
    double mean = 0.0;
    double variance = 1.0;
};
struct Rademacher {};
struct Poisson {
    double rate = 1.0;
};
struct GammaLaw {
    double shape = 1.0;
    double rate = 1.0;
};
struct Exponential {
    double rate = 1.0;
};
/// Characteristic function exp(-|scale * t|^alpha).
struct SymmetricStable {
    double alpha = 2.0;
    double scale = 1.0;
};
struct InverseGaussian {
    double mu = 1.0;
    double lambda = 1.0;
};
/// NIG(alpha, 0, 0, delta). alpha == 0 is the Cauchy limit with scale delta,
/// delta == 0 the point mass at zero.
struct SymmetricNIG {
    double alpha = 1.0;
    double delta = 1.0;
};
struct PointMass {
    double value = 0.0;
};
/// Extension: bounded test family.
struct Uniform {
    double a = 0.0;
    double b = 1.0;
};
/// Extension: exact power tail P(Z > s) = (scale / s)^alpha, s >= scale.
struct Pareto {
    double alpha = 1.0;
    double scale = 1.0;
};

using Family = std::variant<Gaussian, Rademacher, Poisson, GammaLaw, Exponential, SymmetricStable,
                            InverseGaussian, SymmetricNIG, PointMass, Uniform, Pareto>;

struct Support {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
};

/// A scalar law. Parameters are validated on construction (DomainError).
class DistributionSpec {
public:
    DistributionSpec() : DistributionSpec(Gaussian{}) {}
    DistributionSpec(Family family);  // NOLINT(google-explicit-constructor)

    const Family& family() const noexcept { return family_; }

    /// Serialized family name, e.g. "inverse_gaussian".
    std::string_view name() const;

    bool symmetric() const;
    /// True when the law has a Lebesgue density.
    bool continuous() const;
    /// True when truncated moments and tail ratios are Monte Carlo estimates
    /// (symmetric stable with alpha not in {1, 2}).
    bool monte_carlo_tails() const;
    Support support() const;
    /// A magnitude at which |Z| has mass; pivot for quadrature substitutions.
    double scale_hint() const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&);

private:
    Family family_;
};

std::string describe(const DistributionSpec& spec);

// Densities ------------------------------------------------------------------

double density(const DistributionSpec& spec, double x);
double log_density(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);

// Tails and moments -----------------------------------------------------------

/// P(|Z| > s).
double tail_prob(const DistributionSpec& spec, double s);

/// P(|Z| >= s); differs from tail_prob only at atoms.
double tail_prob_closed(const DistributionSpec& spec, double s);

/// E[|Z|^q ; |Z| > s].
double truncated_moment(const DistributionSpec& spec, double q, double s);

/// E|Z|^q.
double abs_moment(const DistributionSpec& spec, double q);

/// Whether E|Z|^q is finite.
bool moment_exists(const DistributionSpec& spec, double q);

struct RatioEstimate {
    double value = 0.0;
    double stderr_ = 0.0;  // nonzero only for Monte Carlo backed laws
};

/// E[|Z|^q ; |Z| > s] / (s^q P(|Z| > s)) computed with the density rescaled
/// at s, so the value stays accurate where both factors underflow. With
/// `closed` the events are {|Z| >= s}. NaN when the tail event is null.
RatioEstimate tail_moment_ratio(const DistributionSpec& spec, double q, double s, bool closed = false);

struct TailSummary {
    double tail = 0.0;              // P(|Z| > s), or P(|Z| >= s) when closed
    double truncated_moment = 0.0;  // E[|Z|^q ; same event]
    RatioEstimate ratio;
};

/// All three quantities of tail_moment_ratio from one pair of integrals.
/// tail and truncated_moment may underflow to 0 where the ratio does not.
TailSummary tail_summary(const DistributionSpec& spec, double q, double s, bool closed = false);

/// Smallest c with P(|Z| <= c) >= u, u in (0, 1).
double abs_quantile(const DistributionSpec& spec, double u);

double mean(const DistributionSpec& spec);
double variance(const DistributionSpec& spec);

/// ||Z - EZ||_inf (infinity when unbounded).
double centered_ess_sup(const DistributionSpec& spec);

/// Law of c * Z, c > 0.
DistributionSpec scale_by(const DistributionSpec& spec, double c);

// Sampling ---------------------------------------------------------------------

/// Per-family draw state. One instance per engine/thread.
class Sampler {
public:
    explicit Sampler(const DistributionSpec& spec);
    double operator()(Engine& engine);

private:
    DistributionSpec spec_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::exponential_distribution<double> exponential_{1.0};
};

/// n i.i.d. draws; deterministic in (spec, seed, n, stream).
std::vector<double> sample(const DistributionSpec& spec, std::uint64_t seed, std::size_t n,
                           std::uint64_t stream = 0);

// Scale families -----------------------------------------------------------------

/// Laws {Lambda(A)} of a Levy-induced random measure indexed by m = m(A).
struct ScaleFamily {
    DistributionSpec base;
    std::vector<double> scales;

    /// Convolution-semigroup law at Lebesgue measure m > 0. Families that are
    /// not infinitely divisible only admit m == 1.
    DistributionSpec law_at(double m) const;
};

}  // namespace chaoslab
