#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "chaoslab/errors.hpp"
#include "chaoslab/seminorms.hpp"

using namespace chaoslab;

namespace {

Path random_path(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z;
    Path p(n);
    for (auto& v : p) v = z(rng);
    return p;
}

double brute_p_variation(const Path& x, double p, const std::vector<std::vector<std::size_t>>& levels) {
    double best = 0.0;
    for (const auto& level : levels) {
        double s = 0.0;
        for (std::size_t i = 1; i < level.size(); ++i) s += std::pow(std::abs(x[level[i]] - x[level[i - 1]]), p);
        best = std::max(best, std::pow(s, 1.0 / p));
    }
    return best;
}

std::vector<PseudoSeminormSpec> examples(std::size_t n) {
    return {PseudoSeminormSpec::sup(n), PseudoSeminormSpec::dyadic_p_variation(n, 1.0),
            PseudoSeminormSpec::dyadic_p_variation(n, 2.0), PseudoSeminormSpec::dyadic_p_variation(n, 3.5),
            PseudoSeminormSpec::functional_sup(n, {LinearFunctional{{{0, 1.0}, {n - 1, -2.0}}}, LinearFunctional{{{1, 0.5}}}})};
}

}  // namespace

TEST_CASE("seminorm values on small paths") {
    const Path x{1.0, -3.0, 2.0, 0.5};
    CHECK(eval_seminorm(PseudoSeminormSpec::sup(4), x) == 3.0);
    const std::vector<std::vector<std::size_t>> levels{{0, 3}, {0, 1, 3}, {0, 1, 2, 3}};
    const auto pv = PseudoSeminormSpec::p_variation(4, 1.0, levels);
    CHECK(eval_seminorm(pv, x) == doctest::Approx(4.0 + 5.0 + 1.5));
    const auto pv2 = PseudoSeminormSpec::p_variation(4, 2.0, levels);
    CHECK(eval_seminorm(pv2, x) == doctest::Approx(std::sqrt(16.0 + 25.0 + 2.25)));
    const auto fs = PseudoSeminormSpec::functional_sup(4, {LinearFunctional{{{0, 1.0}, {2, 1.0}}}, LinearFunctional{{{1, -1.0}}}});
    CHECK(eval_seminorm(fs, x) == 3.0);
    // p-variation ignores constants: a pseudo-seminorm
    CHECK(eval_seminorm(pv2, Path{7.0, 7.0, 7.0, 7.0}) == 0.0);
}

TEST_CASE("p-variation agrees with a brute-force level sum") {
    std::mt19937_64 rng(3);
    for (std::size_t n : {2u, 5u, 9u, 16u, 33u}) {
        const auto levels = dyadic_levels(n);
        for (double p : {1.0, 1.5, 2.0, 4.0}) {
            const auto spec = PseudoSeminormSpec::dyadic_p_variation(n, p);
            for (int k = 0; k < 20; ++k) {
                const Path x = random_path(rng, n);
                CHECK(eval_seminorm(spec, x) == doctest::Approx(brute_p_variation(x, p, levels)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("dyadic levels are nested and end at the full index set") {
    for (std::size_t n : {2u, 3u, 8u, 13u, 64u}) {
        const auto levels = dyadic_levels(n);
        REQUIRE(!levels.empty());
        CHECK(levels.back().size() == n);
        for (std::size_t k = 0; k < levels.size(); ++k) {
            CHECK(levels[k].front() == 0);
            CHECK(levels[k].back() == n - 1);
            if (k > 0) CHECK(std::includes(levels[k].begin(), levels[k].end(), levels[k - 1].begin(), levels[k - 1].end()));
        }
    }
}

TEST_CASE("homogeneity and triangle inequality") {
    std::mt19937_64 rng(9);
    const std::size_t n = 12;
    for (const auto& spec : examples(n)) {
        for (int k = 0; k < 200; ++k) {
            const Path x = random_path(rng, n);
            const Path y = random_path(rng, n);
            const double c = std::normal_distribution<double>(0.0, 3.0)(rng);
            Path cx(n), sum(n);
            for (std::size_t i = 0; i < n; ++i) {
                cx[i] = c * x[i];
                sum[i] = x[i] + y[i];
            }
            CHECK(eval_seminorm(spec, cx) == doctest::Approx(std::abs(c) * eval_seminorm(spec, x)).epsilon(1e-12));
            CHECK(eval_seminorm(spec, sum) <= eval_seminorm(spec, x) + eval_seminorm(spec, y) + 1e-12);
        }
    }
}

TEST_CASE("infinite values propagate") {
    Path x{0.0, 1.0, INFINITY};
    CHECK(std::isinf(eval_seminorm(PseudoSeminormSpec::sup(3), x)));
    CHECK(std::isinf(eval_seminorm(PseudoSeminormSpec::dyadic_p_variation(3, 2.0), x)));
}

TEST_CASE("invalid seminorm specs") {
    CHECK_THROWS_AS(PseudoSeminormSpec::p_variation(4, 1.0, {}), EmptySubdivision);
    CHECK_THROWS_AS(PseudoSeminormSpec::p_variation(4, 0.5, dyadic_levels(4)), DomainError);
    CHECK_THROWS(PseudoSeminormSpec::p_variation(4, 1.0, {{0, 2, 3}, {0, 1, 3}}));  // not nested
    CHECK_THROWS(PseudoSeminormSpec::p_variation(4, 1.0, {{1, 3}}));                 // misses the first index
    CHECK_THROWS(PseudoSeminormSpec::functional_sup(2, {LinearFunctional{{{5, 1.0}}}}));
    CHECK_THROWS_AS(eval_seminorm(PseudoSeminormSpec::sup(3), Path{1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("functional representation") {
    std::mt19937_64 rng(17);
    const std::size_t n = 6;
    for (const auto& spec : {PseudoSeminormSpec::sup(n), PseudoSeminormSpec::dyadic_p_variation(n, 1.0)}) {
        const auto fam = functional_representation(spec);
        CHECK(fam.tolerance == 0.0);
        for (int k = 0; k < 100; ++k) {
            const Path x = random_path(rng, n);
            double best = 0.0;
            for (const auto& f : fam.functionals) best = std::max(best, std::abs(f.apply(x)));
            CHECK(best == doctest::Approx(eval_seminorm(spec, x)).epsilon(1e-12));
        }
    }
    const auto spec = PseudoSeminormSpec::dyadic_p_variation(5, 2.0);
    const auto fam = functional_representation(spec, 1.0 / 16.0);
    CHECK(fam.tolerance > 0.0);
    for (int k = 0; k < 100; ++k) {
        const Path x = random_path(rng, 5);
        double best = 0.0;
        for (const auto& f : fam.functionals) best = std::max(best, std::abs(f.apply(x)));
        const double N = eval_seminorm(spec, x);
        CHECK(best <= N * (1 + 1e-12));
        CHECK(N <= best * (1 + fam.tolerance) + 1e-12);
    }
    CHECK_THROWS_AS(functional_representation(PseudoSeminormSpec::functional_sup(2, {})), DomainError);
}
