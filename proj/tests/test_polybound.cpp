#include <doctest.h>

#include <cmath>
#include <random>

#include "chaoslab/errors.hpp"
#include "chaoslab/polybound.hpp"
#include "oracles.hpp"

using namespace chaoslab;

TEST_CASE("Chebyshev curves") {
    for (int d = 1; d <= 6; ++d) {
        const double eps = 0.3 + 0.1 * d;
        const auto c = chebyshev_curve(d, eps);
        CHECK(c.width() == 1);
        for (double l : {-eps, -0.3 * eps, 0.0, 0.71 * eps, eps}) {
            CHECK(c.at(l)[0] == doctest::Approx(oracle::chebyshev(d, l / eps)).epsilon(1e-12));
        }
        CHECK(c.coefficient_sum()[0] == doctest::Approx(oracle::chebyshev(d, 1.0 / eps)).epsilon(1e-10));
        const auto sup = curve_sup(c, PseudoSeminormSpec::sup(1), 1001);
        CHECK(sup.M == doctest::Approx(1.0).epsilon(1e-12));
        const auto g = verify_genarg(c, PseudoSeminormSpec::sup(1), 1001);
        CHECK(g.pass);
        CHECK(g.lhs == doctest::Approx(std::abs(oracle::chebyshev(d, 1.0 / eps))).epsilon(1e-10));
        // leading coefficient 2^{d-1} / eps^d
        const auto lead = leading_coeff_bound_check(c, PseudoSeminormSpec::sup(1), 1001);
        CHECK(lead.lhs == doctest::Approx(std::pow(2.0, d - 1)).epsilon(1e-10));
        CHECK(lead.pass);
    }
}

TEST_CASE("grid margin") {
    // h = 0.01, d^2 h / eps = 0.08
    CHECK(grid_margin(2, 0.5, 101) == doctest::Approx(1.08));
    CHECK(grid_margin(1, 0.5, 1001) < grid_margin(1, 0.5, 101));
    CHECK_THROWS(grid_margin(2, 0.5, 100));
    CHECK_THROWS(grid_margin(2, 0.5, 51));
}

TEST_CASE("the sampled maximum times the margin bounds a fine-grid maximum") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        PolynomialCurve c;
        c.d = 1 + trial % 4;
        c.epsilon = 0.1 + 0.89 * std::uniform_real_distribution<double>()(rng);
        for (int k = 0; k <= c.d; ++k) c.coeffs.push_back({g(rng), g(rng), g(rng)});
        const auto spec = PseudoSeminormSpec::dyadic_p_variation(3, 1.5);
        const auto coarse = curve_sup(c, spec, 101);
        const auto fine = curve_sup(c, spec, 20001);
        CHECK(fine.M <= coarse.M * coarse.margin * (1 + 1e-12));
    }
}

TEST_CASE("induction factor") {
    CHECK(induction_factor(1) > 1.0);
    for (int d = 3; d <= 10; ++d) CHECK(induction_factor(d) <= 1.0);
    CHECK(induction_factor(3) == doctest::Approx(std::pow(2.0, -4.5) + std::pow(2.0, -3.5) + std::pow(2.0, -0.5)));
}

TEST_CASE("curve validation") {
    PolynomialCurve c;
    c.d = 2;
    c.epsilon = 0.5;
    c.coeffs = {{1.0}, {2.0}};
    CHECK_THROWS(c.validate());
    c.coeffs = {{1.0}, {2.0}, {3.0, 4.0}};
    CHECK_THROWS(c.validate());
    c.coeffs = {{1.0}, {2.0}, {3.0}};
    c.epsilon = 0.0;
    CHECK_THROWS(c.validate());
    c.epsilon = 0.5;
    CHECK_NOTHROW(c.validate());
    CHECK_THROWS(verify_genarg(c, PseudoSeminormSpec::sup(2), 1001));
}

TEST_CASE("random corpus") {
    CorpusConfig config;
    config.n = 200;
    const auto a = run_genarg_corpus(config, 7);
    CHECK(a.rows.size() == 200);
    CHECK(a.genarg_pass == 200);
    CHECK(a.leading_pass == 200);
    bool sup = false, pvar = false;
    for (const auto& r : a.rows) {
        CHECK(r.d >= 1);
        CHECK(r.d <= 4);
        CHECK(r.epsilon > 0.1);
        CHECK(r.epsilon < 0.99);
        sup = sup || r.seminorm == "sup";
        pvar = pvar || r.seminorm.rfind("p_variation", 0) == 0;
    }
    CHECK(sup);
    CHECK(pvar);
    const auto b = run_genarg_corpus(config, 7);
    CHECK(b.rows.back().genarg.lhs == a.rows.back().genarg.lhs);
    CHECK(run_genarg_corpus(config, 8).rows.back().genarg.lhs != a.rows.back().genarg.lhs);
}

TEST_CASE("Chebyshev extremal instance, d = 3, eps = 0.9") {
    const auto c = chebyshev_curve(3, 0.9);
    const auto g = verify_genarg(c, PseudoSeminormSpec::sup(1), 1001);
    CHECK(g.pass);
    CHECK(g.M == doctest::Approx(1.0));
    CHECK(g.margin >= 1.0);
    // T_3(1/0.9) = 4/0.729 - 3/0.9
    CHECK(g.lhs == doctest::Approx(4.0 / 0.729 - 3.0 / 0.9).epsilon(1e-12));
}

TEST_CASE("the sampled maximum is nondecreasing in eps") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        PolynomialCurve c;
        c.d = 1 + trial % 4;
        for (int k = 0; k <= c.d; ++k) c.coeffs.push_back({g(rng), g(rng)});
        double prev = 0.0;
        // same step size on every grid, so each grid contains the previous one
        std::size_t n = 101;
        for (double eps : {0.1, 0.2, 0.4, 0.8}) {
            c.epsilon = eps;
            const double M = curve_sup(c, PseudoSeminormSpec::sup(2), n).M;
            n = 2 * n - 1;
            CHECK(M >= prev * (1 - 1e-9));
            prev = M;
        }
    }
}
