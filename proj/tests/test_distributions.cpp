#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "chaoslab/distributions.hpp"
#include "chaoslab/errors.hpp"
#include "oracles.hpp"

using namespace chaoslab;

namespace {

double sample_mean(const std::vector<double>& xs) { return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size(); }

double sample_var(const std::vector<double>& xs) {
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / (xs.size() - 1);
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(DistributionSpec(Gaussian{0.0, -1.0}), DomainError);
    CHECK_THROWS_AS(DistributionSpec(InverseGaussian{0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(DistributionSpec(SymmetricStable{2.5, 1.0}), DomainError);
    CHECK_THROWS_AS(DistributionSpec(Uniform{1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(DistributionSpec(Poisson{0.0}), DomainError);
    CHECK_NOTHROW(DistributionSpec(SymmetricNIG{0.0, 1.0}));
}

TEST_CASE("densities integrate to one and match closed forms") {
    const DistributionSpec ig{InverseGaussian{1.0, 1.0}};
    CHECK(oracle::simpson([&](double x) { return density(ig, x); }, 1e-9, 60.0, 200000) ==
          doctest::Approx(1.0).epsilon(1e-7));
    for (double x : {0.05, 0.3, 1.0, 2.0, 7.5}) {
        CAPTURE(x);
        CHECK(cdf(ig, x) == doctest::Approx(oracle::ig_cdf(x, 1.0, 1.0)).epsilon(1e-9));
    }
    const DistributionSpec nig{SymmetricNIG{1.0, 1.0}};
    for (double x : {0.0, 0.5, 3.0, 20.0}) {
        CAPTURE(x);
        CHECK(density(nig, x) == doctest::Approx(oracle::nig_density(x, 1.0, 1.0)).epsilon(1e-9));
    }
    const DistributionSpec g{Gaussian{1.0, 4.0}};
    CHECK(cdf(g, 3.0) == doctest::Approx(oracle::normal_cdf(1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(density(DistributionSpec{Poisson{2.0}}, 1.0), DiscreteFamily);
}

TEST_CASE("symmetric stable density") {
    // f(0) = Gamma(1 + 1/alpha) / pi
    const DistributionSpec s15{SymmetricStable{1.5, 1.0}};
    CHECK(density(s15, 0.0) == doctest::Approx(std::tgamma(1.0 + 1.0 / 1.5) / std::numbers::pi).epsilon(1e-8));
    // alpha = 1 is Cauchy, alpha = 2 is N(0, 2)
    CHECK(density(DistributionSpec{SymmetricStable{1.0, 2.0}}, 1.0) == doctest::Approx(2.0 / (std::numbers::pi * 5.0)).epsilon(1e-12));
    CHECK(density(DistributionSpec{SymmetricStable{2.0, 1.0}}, 1.0) ==
          doctest::Approx(std::exp(-0.25) / std::sqrt(4 * std::numbers::pi)).epsilon(1e-12));
    const DistributionSpec s05{SymmetricStable{0.5, 1.0}};
    for (double x : {5.0, 12.0, 150.0}) {
        CAPTURE(x);
        CHECK(density(s05, x) == doctest::Approx(oracle::stable_density_series(x, 0.5)).epsilon(1e-7));
    }
    CHECK(cdf(s15, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    // tail index alpha: s^alpha P(|Z| > s) -> 2 Gamma(alpha) sin(pi alpha / 2) / pi
    const double c = 2.0 * std::tgamma(1.5) * std::sin(std::numbers::pi * 0.75) / std::numbers::pi;
    CHECK(std::pow(1e4, 1.5) * tail_prob(s15, 1e4) == doctest::Approx(c).epsilon(1e-3));
}

TEST_CASE("tails and truncated moments against closed forms") {
    const DistributionSpec g{Gaussian{}};
    for (double s : {0.1, 1.0, 5.0, 30.0}) {
        CAPTURE(s);
        CHECK(tail_prob(g, s) == doctest::Approx(2.0 * oracle::normal_sf(s)).epsilon(1e-10));
        // E[|Z|^2; |Z| > s] = 2 (s phi(s) + Q(s))
        const double phi = std::exp(-s * s / 2) / std::sqrt(2 * std::numbers::pi);
        CHECK(truncated_moment(g, 2.0, s) == doctest::Approx(2.0 * (s * phi + oracle::normal_sf(s))).epsilon(1e-9));
    }
    for (double q : {0.2, 1.0, 2.5, 8.0}) {
        CAPTURE(q);
        CHECK(abs_moment(g, q) == doctest::Approx(oracle::gaussian_abs_moment(q)).epsilon(1e-10));
    }
    const DistributionSpec e{Exponential{2.0}};
    // E[Z; Z > s] = (s + 1/rate) e^{-rate s}
    CHECK(truncated_moment(e, 1.0, 1.5) == doctest::Approx((1.5 + 0.5) * std::exp(-3.0)).epsilon(1e-10));
    const DistributionSpec pois{Poisson{3.0}};
    double tm = 0.0;
    double tail = 0.0;
    for (int k = 5; k < 100; ++k) {
        tm += k * k * oracle::poisson_pmf(k, 3.0);
        tail += oracle::poisson_pmf(k, 3.0);
    }
    CHECK(truncated_moment(pois, 2.0, 4.0) == doctest::Approx(tm).epsilon(1e-12));
    CHECK(tail_prob(pois, 4.0) == doctest::Approx(tail).epsilon(1e-12));
    CHECK(tail_prob_closed(pois, 4.0) == doctest::Approx(tail + oracle::poisson_pmf(4, 3.0)).epsilon(1e-12));
}

TEST_CASE("tail moment ratio stays accurate where both factors underflow") {
    const DistributionSpec par{Pareto{2.0, 1.0}};
    for (double s : {1.0, 10.0, 1e6}) CHECK(tail_moment_ratio(par, 1.0, s).value == doctest::Approx(2.0).epsilon(1e-9));
    // Gaussian: ratio -> 1 + q / s^2 for large s
    const DistributionSpec g{Gaussian{}};
    const double s = 60.0;
    CHECK(tail_prob(g, s) < 1e-300);
    CHECK(tail_moment_ratio(g, 2.0, s).value == doctest::Approx(1.0 + 2.0 / (s * s)).epsilon(1e-5));
    const auto sum = tail_summary(g, 2.0, 3.0);
    CHECK(sum.ratio.value == doctest::Approx(sum.truncated_moment / (9.0 * sum.tail)).epsilon(1e-10));
}

TEST_CASE("moments that do not exist") {
    const DistributionSpec par{Pareto{2.0, 1.0}};
    CHECK(moment_exists(par, 1.9));
    CHECK_FALSE(moment_exists(par, 2.0));
    CHECK_THROWS_AS(abs_moment(par, 2.5), MomentDoesNotExist);
    const DistributionSpec cauchy{SymmetricNIG{0.0, 1.0}};
    CHECK_FALSE(moment_exists(cauchy, 1.0));
    CHECK(moment_exists(DistributionSpec{SymmetricStable{1.5, 1.0}}, 1.4));
}

TEST_CASE("abs_quantile inverts the tail") {
    for (const DistributionSpec& d : {DistributionSpec{Gaussian{}}, DistributionSpec{InverseGaussian{1.0, 0.3}},
                                      DistributionSpec{SymmetricNIG{2.0, 0.5}}, DistributionSpec{Pareto{1.5, 2.0}}}) {
        CAPTURE(describe(d));
        for (double u : {0.1, 0.5, 0.99}) {
            const double c = abs_quantile(d, u);
            CHECK(1.0 - tail_prob(d, c) == doctest::Approx(u).epsilon(1e-8));
        }
    }
    CHECK(abs_quantile(DistributionSpec{Gaussian{}}, 0.5) == doctest::Approx(0.6744897501960817).epsilon(1e-10));
}

TEST_CASE("samplers pass Kolmogorov-Smirnov against independent cdfs") {
    const std::size_t n = 20000;
    {
        const auto xs = sample(DistributionSpec{InverseGaussian{1.0, 1.0}}, 11, n);
        CHECK(oracle::ks_statistic(xs, [](double x) { return oracle::ig_cdf(x, 1.0, 1.0); }) < oracle::ks_critical(n));
    }
    {
        const auto xs = sample(DistributionSpec{InverseGaussian{0.01, 1e-4}}, 12, n);
        CHECK(oracle::ks_statistic(xs, [](double x) { return oracle::ig_cdf(x, 0.01, 1e-4); }) < oracle::ks_critical(n));
    }
    {
        const auto xs = sample(DistributionSpec{Gaussian{2.0, 9.0}}, 13, n);
        CHECK(oracle::ks_statistic(xs, [](double x) { return oracle::normal_cdf((x - 2.0) / 3.0); }) < oracle::ks_critical(n));
    }
    {
        const auto xs = sample(DistributionSpec{SymmetricStable{1.0, 1.0}}, 14, n);
        CHECK(oracle::ks_statistic(xs, [](double x) { return 0.5 + std::atan(x) / std::numbers::pi; }) <
              oracle::ks_critical(n));
    }
    {
        // alpha = 2 with scale 1 is N(0, 2)
        const auto xs = sample(DistributionSpec{SymmetricStable{2.0, 1.0}}, 15, n);
        CHECK(oracle::ks_statistic(xs, [](double x) { return oracle::normal_cdf(x / std::numbers::sqrt2); }) <
              oracle::ks_critical(n));
    }
    {
        const auto xs = sample(DistributionSpec{Exponential{3.0}}, 16, n);
        CHECK(oracle::ks_statistic(xs, [](double x) { return 1.0 - std::exp(-3.0 * x); }) < oracle::ks_critical(n));
    }
    {
        const auto xs = sample(DistributionSpec{Pareto{1.5, 2.0}}, 17, n);
        CHECK(oracle::ks_statistic(xs, [](double x) { return x < 2.0 ? 0.0 : 1.0 - std::pow(2.0 / x, 1.5); }) <
              oracle::ks_critical(n));
    }
}

TEST_CASE("NIG sampler: chi-square on equiprobable bins of the oracle density") {
    const std::size_t n = 40000;
    const auto xs = sample(DistributionSpec{SymmetricNIG{1.0, 1.0}}, 21, n);
    // Bin edges from the oracle cdf, by Simpson integration of the density.
    const int bins = 20;
    std::vector<double> edges;
    double acc = 0.0;
    double x = -60.0;
    const double h = 0.002;
    double target = 1.0 / bins;
    // mass beyond +-60 is below 1e-25
    while (x < 60.0 && static_cast<int>(edges.size()) < bins - 1) {
        acc += oracle::simpson([](double t) { return oracle::nig_density(t, 1.0, 1.0); }, x, x + h, 2);
        x += h;
        if (acc >= target) {
            edges.push_back(x);
            target += 1.0 / bins;
        }
    }
    REQUIRE(edges.size() == bins - 1);
    std::vector<double> count(bins, 0.0);
    for (double v : xs) count[std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()] += 1.0;
    double chi2 = 0.0;
    const double expect = static_cast<double>(n) / bins;
    for (double c : count) chi2 += (c - expect) * (c - expect) / expect;
    // 19 degrees of freedom, 0.999 quantile 43.8; the grid cdf adds a little slack
    CHECK(chi2 < 50.0);
}

TEST_CASE("Poisson, gamma and Rademacher samplers reproduce their moments") {
    const std::size_t n = 200000;
    const auto p = sample(DistributionSpec{Poisson{4.0}}, 31, n);
    CHECK(sample_mean(p) == doctest::Approx(4.0).epsilon(0.01));
    CHECK(sample_var(p) == doctest::Approx(4.0).epsilon(0.02));
    const auto g = sample(DistributionSpec{GammaLaw{0.3, 2.0}}, 32, n);
    CHECK(sample_mean(g) == doctest::Approx(0.15).epsilon(0.02));
    CHECK(sample_var(g) == doctest::Approx(0.075).epsilon(0.04));
    const auto r = sample(DistributionSpec{Rademacher{}}, 33, n);
    CHECK(std::all_of(r.begin(), r.end(), [](double v) { return std::abs(v) == 1.0; }));
    CHECK(std::abs(sample_mean(r)) < 0.01);
}

TEST_CASE("scale families are convolution semigroups") {
    // IG: Z(m1) + Z(m2) ~ Z(m1 + m2); compare sums of half-scale draws with the oracle cdf at m = 1.
    const ScaleFamily ig{DistributionSpec{InverseGaussian{1.0, 1.0}}, {}};
    const std::size_t n = 20000;
    const auto a = sample(ig.law_at(0.5), 41, n);
    const auto b = sample(ig.law_at(0.5), 41, n, 1);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = a[i] + b[i];
    CHECK(oracle::ks_statistic(s, [](double x) { return oracle::ig_cdf(x, 1.0, 1.0); }) < oracle::ks_critical(n));

    const ScaleFamily nig{DistributionSpec{SymmetricNIG{1.0, 1.0}}, {}};
    const auto law = nig.law_at(0.25);
    CHECK(variance(law) == doctest::Approx(0.25 * variance(nig.base)).epsilon(1e-12));
    const ScaleFamily gauss{DistributionSpec{Gaussian{}}, {}};
    CHECK(variance(gauss.law_at(1e-3)) == doctest::Approx(1e-3).epsilon(1e-12));
    const ScaleFamily signs{DistributionSpec{Rademacher{}}, {}};
    CHECK_THROWS_AS(signs.law_at(0.5), DomainError);
}

TEST_CASE("sampling is deterministic and stream separated") {
    const DistributionSpec d{SymmetricNIG{1.0, 1.0}};
    CHECK(sample(d, 5, 10000) == sample(d, 5, 10000));
    CHECK(sample(d, 5, 10000) != sample(d, 6, 10000));
    CHECK(sample(d, 5, 10000, 0) != sample(d, 5, 10000, 1));
    set_worker_count(3);
    const auto threaded = sample(d, 5, 10000);
    set_worker_count(1);
    CHECK(threaded == sample(d, 5, 10000));
}

TEST_CASE("mean, variance, ess sup and scale_by") {
    CHECK(variance(DistributionSpec{InverseGaussian{2.0, 3.0}}) == doctest::Approx(8.0 / 3.0));
    CHECK(variance(DistributionSpec{Uniform{0.0, 1.0}}) == doctest::Approx(1.0 / 12.0));
    CHECK(centered_ess_sup(DistributionSpec{Uniform{0.0, 1.0}}) == doctest::Approx(0.5));
    CHECK(std::isinf(centered_ess_sup(DistributionSpec{Gaussian{}})));
    CHECK(centered_ess_sup(DistributionSpec{Rademacher{}}) == 1.0);
    const auto scaled = scale_by(DistributionSpec{SymmetricNIG{1.0, 1.0}}, 3.0);
    CHECK(variance(scaled) == doctest::Approx(9.0 * variance(DistributionSpec{SymmetricNIG{1.0, 1.0}})));
    CHECK(tail_prob(scaled, 3.0) == doctest::Approx(tail_prob(DistributionSpec{SymmetricNIG{1.0, 1.0}}, 1.0)).epsilon(1e-9));
}
