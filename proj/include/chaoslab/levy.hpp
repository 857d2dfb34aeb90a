#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chaoslab {

struct Atom {
    double size = 0.0;
    double rate = 0.0;
};

/// Finite jump measure sum_j rate_j delta_{size_j}.
struct AtomicJumps {
    std::vector<Atom> atoms;
};

/// nu(dx) = c |x|^{-1-alpha} dx on 0 < |x| <= cutoff, alpha in (0, 2).
struct TruncatedPowerLaw {
    double c = 1.0;
    double alpha = 1.0;
    double cutoff = 1.0;
};

/// A Levy density on [-radius, radius] given as a function. `square_integrable`
/// declares int (1 ^ x^2) nu(dx) < infinity.
struct DensityJumps {
    std::function<double(double)> density;
    double radius = 1.0;
    bool symmetric = false;
    bool square_integrable = false;
    std::string label = "density";
};

struct NoJumps {};

using JumpPart = std::variant<NoJumps, AtomicJumps, TruncatedPowerLaw, DensityJumps>;

/// Levy triplet surrogate. E[Y_1] = drift + int x nu(dx) (no truncation
/// convention), Var(Y_1) = gaussian_variance + int x^2 nu(dx).
struct LevyModel {
    double gaussian_variance = 0.0;
    double drift = 0.0;
    JumpPart jumps;

    /// DomainError when rates are not positive, alpha is outside (0, 2) and so on.
    void validate() const;
    /// nu symmetric and no drift, so every Y_t is symmetric.
    bool symmetric() const;
    bool has_gaussian_part() const { return gaussian_variance > 0.0; }
    bool deterministic() const;
    std::string describe() const;
};

/// Real part of the characteristic exponent: sigma^2 s^2 / 2 + int (1 - cos sx) nu(dx),
/// so that |phi_{Y_t}(s)| = exp(-t kappa(s)).
double kappa(const LevyModel& model, double s);

/// phi_{Y_t}(s). Non-symmetric density models are rejected (DomainError).
std::complex<double> characteristic_function(const LevyModel& model, double t, double s);

/// psi(s) = 4 int (1 ^ |sx|^2) nu(dx).
double psi(const LevyModel& model, double s);

double jump_second_moment(const LevyModel& model);  // int x^2 nu(dx)
double jump_mean(const LevyModel& model);           // int x nu(dx)
double jump_total_mass(const LevyModel& model);     // nu(R), may be infinite
double mean(const LevyModel& model);                // E[Y_1]
double variance(const LevyModel& model);            // Var(Y_1)

/// E[Y_t^2] = Var(Y_1) t + E[Y_1]^2 t^2.
double second_moment(const LevyModel& model, double t);

struct L1Config {
    double rel_tol = 1e-10;
    /// Upper integration limit as a multiple of the model's characteristic frequency.
    double frequency_span = 4096.0;
    /// Warn when the uncertainty of the tail estimate exceeds this fraction of the value.
    double slow_decay_tolerance = 1e-5;
};

struct L1Result {
    double value = 0.0;
    bool is_bound = false;  // true: symmetrization bound, not the value
    double tail = 0.0;      // contribution assigned to [S, infinity)
    double upper_limit = 0.0;
    std::vector<std::string> warnings;
};

/// ||Y_t||_1 = (1/pi) int (1 - Re phi(s)) / s^2 ds for symmetric models; for
/// others the bound ||Y~_t||_1 + |E Y_1| t with Y~ the symmetrization.
L1Result l1_norm_cf(const LevyModel& model, double t, const L1Config& config = {});

/// (1/pi) int (t psi(s) ^ 1) / s^2 ds. Requires a symmetric model without
/// Gaussian part.
L1Result l1_upper_bound_psi(const LevyModel& model, double t, const L1Config& config = {});

struct MomentRatioRow {
    double t = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double ratio = 0.0;
    bool l1_is_bound = false;
};

/// ||Y_t||_2 / ||Y_t||_1 along a decreasing t grid.
std::vector<MomentRatioRow> moment_ratio_curve(const LevyModel& model, const std::vector<double>& t_grid,
                                               const L1Config& config = {});

}  // namespace chaoslab
