#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

namespace chaoslab {

/// A function on the finite ordered index set T, stored by position.
using Path = std::vector<double>;

/// Value of N(x) when the seminorm is infinite.
inline constexpr double kInfiniteSeminorm = std::numeric_limits<double>::infinity();

/// x -> sum_i w_i x(t_i) with finite support.
struct LinearFunctional {
    std::vector<std::pair<std::size_t, double>> weights;

    double apply(const Path& path) const;
};

struct SupNorm {};

/// sup over the given levels n of (sum_i |x(t_i^n) - x(t_{i-1}^n)|^p)^{1/p}.
/// Levels hold positions into T, are nested, and start and end at the
/// first and last position.
struct PVariation {
    double p = 1.0;
    std::vector<std::vector<std::size_t>> levels;
};

struct FunctionalSup {
    std::vector<LinearFunctional> functionals;
};

using SeminormVariant = std::variant<SupNorm, PVariation, FunctionalSup>;

class PseudoSeminormSpec {
public:
    /// Validates the variant against dim = |T| (DomainError, EmptySubdivision).
    PseudoSeminormSpec(std::size_t dim, SeminormVariant variant);

    static PseudoSeminormSpec sup(std::size_t dim);
    static PseudoSeminormSpec p_variation(std::size_t dim, double p, std::vector<std::vector<std::size_t>> levels);
    /// p-variation over dyadic refinements of T, ending at the full index set.
    static PseudoSeminormSpec dyadic_p_variation(std::size_t dim, double p);
    static PseudoSeminormSpec functional_sup(std::size_t dim, std::vector<LinearFunctional> functionals);

    std::size_t dim() const noexcept { return dim_; }
    const SeminormVariant& variant() const noexcept { return variant_; }

private:
    std::size_t dim_;
    SeminormVariant variant_;
};

/// Nested dyadic levels of positions 0..dim-1.
std::vector<std::vector<std::size_t>> dyadic_levels(std::size_t dim);

/// N(path); +infinity when a path value is infinite.
double eval_seminorm(const PseudoSeminormSpec& spec, const Path& path);

/// Per-level variation sums of a PVariation seminorm.
std::vector<double> variation_by_level(const PVariation& pv, const Path& path);

struct FunctionalFamily {
    std::vector<LinearFunctional> functionals;
    /// Relative underestimate bound: N(x) <= sup|x*(x)| * (1 + tolerance).
    double tolerance = 0.0;
    /// Mesh step of the dual-ball discretization (0 when exact).
    double resolution = 0.0;
};

/// A finite family {x_n*} with sup_n |x_n*(x)| = N(x) (Sup, PVariation p = 1)
/// or approximating it from below (PVariation p > 1, cube-surface mesh of the
/// dual unit ball). DomainError for FunctionalSup input or when the family
/// would exceed max_functionals.
FunctionalFamily functional_representation(const PseudoSeminormSpec& spec, double resolution = 1.0 / 64.0,
                                           std::size_t max_functionals = 2000000);

}  // namespace chaoslab
