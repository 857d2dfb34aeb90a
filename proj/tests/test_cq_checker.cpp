#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chaoslab/cq_checker.hpp"
#include "chaoslab/errors.hpp"
#include "oracles.hpp"

using namespace chaoslab;

TEST_CASE("geometric grid") {
    const auto g = geometric_grid(1.0, 1e3, 4);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == doctest::Approx(10.0));
    CHECK(g[3] == 1e3);
    CHECK(default_s_multipliers().size() == 40);
}

TEST_CASE("verdict strings round trip") {
    for (auto v : {Verdict::Pass, Verdict::FailDivergent, Verdict::Inconclusive}) CHECK(verdict_from_string(to_string(v)) == v);
    CHECK(to_string(Verdict::FailDivergent) == "FAIL_DIVERGENT");
}

TEST_CASE("Pareto: exact beta2 = alpha / (alpha - q)") {
    const ScaleFamily f{DistributionSpec{Pareto{2.0, 1.0}}, {}};
    const auto r = check_cq(f, 1.0);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.beta2_max == doctest::Approx(2.0).epsilon(1e-8));
    const auto bad = check_cq(f, 2.5);
    CHECK(bad.verdict == Verdict::FailDivergent);
    CHECK(bad.diagnostics.find("infinite") != std::string::npos);
}

TEST_CASE("Rademacher: beta1 = beta2 = 1") {
    const auto r = check_cq(ScaleFamily{DistributionSpec{Rademacher{}}, {}}, 3.0);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.beta1_min == 1.0);
    CHECK(r.beta2_max == 1.0);
    CHECK(r.scales.front().c_z == 1.0);
}

TEST_CASE("Gaussian scale family passes at every q") {
    const ScaleFamily f{DistributionSpec{Gaussian{}}, {1.0, 1e-2, 1e-4}};
    for (double q : {1.0, 4.0}) {
        const auto r = check_cq(f, q);
        CHECK(r.verdict == Verdict::Pass);
        CHECK(r.beta1_min == doctest::Approx(0.5).epsilon(1e-9));
        // scale invariance: beta2 equal at every scale
        CHECK(r.scales.front().beta2 == doctest::Approx(r.scales.back().beta2).epsilon(1e-8));
    }
}

TEST_CASE("inverse Gaussian: C_q holds only below q = 1/2") {
    const ScaleFamily f{DistributionSpec{InverseGaussian{1.0, 1.0}}, {1.0, 1e-1, 1e-2, 1e-3}};
    CHECK(check_cq(f, 0.2).verdict == Verdict::Pass);
    CHECK(check_cq(f, 0.6).verdict == Verdict::FailDivergent);
    const auto r = check_cq(f, 1.0);
    CHECK(r.verdict == Verdict::FailDivergent);
    CHECK(r.scales.back().beta2 > 10.0 * r.scales.front().beta2);
}

TEST_CASE("symmetric NIG: C_q holds only below q = 1") {
    const ScaleFamily f{DistributionSpec{SymmetricNIG{1.0, 1.0}}, {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5}};
    CHECK(check_cq(f, 0.5).verdict == Verdict::Pass);
    CHECK(check_cq(f, 1.5).verdict == Verdict::FailDivergent);
}

TEST_CASE("ratio curve entries are consistent") {
    const auto r = check_cq(ScaleFamily{DistributionSpec{Exponential{1.0}}, {}}, 1.0);
    const auto& rec = r.scales.front();
    CHECK(rec.c_z == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    for (const auto& p : rec.curve) {
        // E[Z; Z > s] / (s P(Z > s)) = 1 + 1/s
        CHECK(p.ratio == doctest::Approx(1.0 + 1.0 / p.s).epsilon(1e-8));
    }
}

TEST_CASE("C_infinity") {
    const auto r = check_cinf({DistributionSpec{Uniform{0.0, 1.0}}, DistributionSpec{Rademacher{}}});
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.beta3 == doctest::Approx(std::sqrt(3.0)));
    const auto g = check_cinf({DistributionSpec{Gaussian{}}});
    CHECK(g.verdict == Verdict::FailDivergent);
    CHECK(std::isinf(g.beta3));
}

TEST_CASE("moment ratio bound formula") {
    CHECK(moment_ratio_bound(0.5, 4.0, 1.0, 2.0) == doctest::Approx(2.0 * 2.0));
    // beta2 below one is replaced by one
    CHECK(moment_ratio_bound(0.25, 0.5, 2.0, 4.0) == doctest::Approx(2.0));
}

TEST_CASE("tail index estimates") {
    const auto par = tail_index_estimate(DistributionSpec{Pareto{2.0, 1.0}}, geometric_grid(2.0, 2e3, 20));
    CHECK(par.slope == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(par.regularly_varying);
    const auto st = tail_index_estimate(DistributionSpec{SymmetricStable{1.5, 1.0}}, geometric_grid(10.0, 1e4, 20));
    CHECK(st.slope == doctest::Approx(-1.5).epsilon(0.02));
    CHECK(st.regularly_varying);
    const auto st3 = tail_index_estimate(DistributionSpec{SymmetricStable{1.5, 1.0}}, geometric_grid(10.0, 1e3, 20));
    CHECK(std::abs(st3.slope + 1.5) <= 0.15);
    const auto g = tail_index_estimate(DistributionSpec{Gaussian{}}, geometric_grid(0.1, 10.0, 20));
    CHECK_FALSE(g.regularly_varying);
    // explicit tail function: s^-3 log s is regularly varying with index -3
    const auto f = tail_index_estimate([](double s) { return std::pow(s, -3.0) * std::log(s); }, geometric_grid(1e2, 1e6, 20));
    CHECK(f.slope == doctest::Approx(-3.0).epsilon(0.05));
    CHECK_THROWS_AS(tail_index_estimate(DistributionSpec{Gaussian{}}, geometric_grid(1.0, 100.0, 10)), TailUnderflow);
    CHECK_THROWS(tail_index_estimate(DistributionSpec{Gaussian{}}, geometric_grid(1.0, 2.0, 10)));
}
