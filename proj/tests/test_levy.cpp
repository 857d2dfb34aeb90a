#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chaoslab/errors.hpp"
#include "chaoslab/levy.hpp"
#include "oracles.hpp"

using namespace chaoslab;

namespace {

LevyModel unit_jump() {
    return LevyModel{0.0, 0.0, AtomicJumps{{{1.0, 0.5}, {-1.0, 0.5}}}};
}

LevyModel brownian() { return LevyModel{1.0, 0.0, NoJumps{}}; }

LevyModel power_law(double c, double alpha, double cutoff) {
    return LevyModel{0.0, 0.0, TruncatedPowerLaw{c, alpha, cutoff}};
}

// psi(s) = 4 int (1 ^ |sx|^2) nu(dx) for nu = c |x|^{-1-alpha} on |x| <= R
double psi_closed(double s, double c, double a, double R) {
    const double u = std::min(R, 1.0 / s);
    double v = s * s * std::pow(u, 2.0 - a) / (2.0 - a);
    if (1.0 / s < R) v += (std::pow(s, a) - std::pow(R, -a)) / a;
    return 8.0 * c * v;
}

}  // namespace

TEST_CASE("model validation") {
    CHECK_THROWS_AS(LevyModel({-1.0, 0.0, NoJumps{}}).validate(), DomainError);
    CHECK_THROWS_AS(power_law(1.0, 2.0, 1.0).validate(), DomainError);
    CHECK_THROWS_AS(power_law(1.0, 1.0, 0.0).validate(), DomainError);
    CHECK_THROWS_AS((LevyModel{0.0, 0.0, AtomicJumps{{{1.0, -0.5}}}}.validate()), DomainError);
    CHECK(LevyModel{}.deterministic());
    CHECK(unit_jump().symmetric());
    CHECK_FALSE((LevyModel{0.0, 0.0, AtomicJumps{{{1.0, 1.0}}}}.symmetric()));
}

TEST_CASE("characteristic exponent") {
    for (double s : {0.1, 1.0, 7.0}) {
        CHECK(kappa(unit_jump(), s) == doctest::Approx(1.0 - std::cos(s)).epsilon(1e-14));
        CHECK(kappa(brownian(), s) == doctest::Approx(s * s / 2));
        // kappa = 2c int_0^R (1 - cos sx) x^{-2} dx for alpha = 1
        const double ref = 2.0 * oracle::simpson([s](double x) { return x == 0.0 ? s * s / 2 : (1.0 - std::cos(s * x)) / (x * x); }, 0.0, 1.0);
        CHECK(kappa(power_law(1.0, 1.0, 1.0), s) == doctest::Approx(ref).epsilon(1e-8));
    }
    const auto phi = characteristic_function(unit_jump(), 2.0, 1.3);
    CHECK(phi.real() == doctest::Approx(std::exp(-2.0 * (1.0 - std::cos(1.3)))));
    CHECK(phi.imag() == doctest::Approx(0.0));
}

TEST_CASE("psi matches its closed form for a truncated power law") {
    for (double a : {0.5, 1.0, 1.7}) {
        for (double s : {0.01, 0.5, 2.0, 300.0}) {
            CAPTURE(a);
            CAPTURE(s);
            CHECK(psi(power_law(0.7, a, 2.0), s) == doctest::Approx(psi_closed(s, 0.7, a, 2.0)).epsilon(1e-9));
        }
    }
}

TEST_CASE("moments") {
    CHECK(jump_second_moment(unit_jump()) == 1.0);
    CHECK(jump_mean(unit_jump()) == 0.0);
    CHECK(jump_total_mass(unit_jump()) == 1.0);
    CHECK(std::isinf(jump_total_mass(power_law(1.0, 1.0, 1.0))));
    // c int x^2 |x|^{-2} on [-1, 1] = 2c
    CHECK(jump_second_moment(power_law(1.0, 1.0, 1.0)) == doctest::Approx(2.0));
    const LevyModel poisson{0.0, 0.0, AtomicJumps{{{1.0, 1.0}}}};
    CHECK(second_moment(poisson, 3.0) == doctest::Approx(3.0 + 9.0));
    for (double t : {1e-4, 1e-1, 1.0}) CHECK(second_moment(unit_jump(), t) / t == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("L1 norm of the unit-jump model against the Skellam series") {
    for (double t : {1e-4, 1e-2, 0.1, 1.0, 5.0}) {
        CAPTURE(t);
        const auto r = l1_norm_cf(unit_jump(), t);
        CHECK_FALSE(r.is_bound);
        CHECK(r.warnings.empty());
        CHECK(r.value == doctest::Approx(oracle::skellam_abs_mean(t / 2.0)).epsilon(1e-6));
    }
}

TEST_CASE("L1 norm of Brownian motion is sqrt(2t/pi)") {
    for (double t : {1e-4, 0.3, 1.0, 10.0}) {
        CHECK(l1_norm_cf(brownian(), t).value == doctest::Approx(std::sqrt(2.0 * t / std::numbers::pi)).epsilon(1e-9));
    }
}

TEST_CASE("asymmetric models are reported as bounds") {
    const LevyModel poisson{0.0, 0.0, AtomicJumps{{{1.0, 1.0}}}};
    const auto r = l1_norm_cf(poisson, 0.5);
    CHECK(r.is_bound);
    CHECK(r.value >= 0.5);  // E|N_t| = t
    const LevyModel drifted{1.0, 2.0, NoJumps{}};
    CHECK(l1_norm_cf(drifted, 1.0).is_bound);
}

TEST_CASE("psi bound dominates the L1 norm") {
    const auto m = power_law(1.0, 1.2, 1.0);
    for (double t : {1e-3, 1e-1}) {
        const double l1 = l1_norm_cf(m, t).value;
        const auto b = l1_upper_bound_psi(m, t);
        CHECK(b.is_bound);
        CHECK(l1 <= b.value);
    }
    CHECK_THROWS(l1_upper_bound_psi(brownian(), 1.0));
}

TEST_CASE("small-time moment ratios") {
    const auto rows = moment_ratio_curve(unit_jump(), {1e-1, 1e-2, 1e-3, 1e-4});
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) CHECK(r.l2 * r.l2 / r.t == doctest::Approx(1.0).epsilon(1e-12));
    // l1 ~ t, so the ratio grows like t^{-1/2}
    CHECK(rows.back().ratio == doctest::Approx(100.0).epsilon(0.01));
    const auto b = moment_ratio_curve(brownian(), {1e-1, 1e-4});
    for (const auto& r : b) CHECK(r.ratio == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-8));
}
