#include "chaoslab/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {
namespace {

void check_dim(std::size_t dim, const Path& path) {
    if (path.size() != dim) {
        throw DimensionMismatch("seminorm: path has " + std::to_string(path.size()) + " entries, T has " +
                                std::to_string(dim));
    }
}

double level_sum(const std::vector<std::size_t>& level, double p, const Path& path) {
    // Scaled by the largest increment so that |d|^p neither overflows nor underflows.
    double biggest = 0.0;
    for (std::size_t i = 1; i < level.size(); ++i) {
        biggest = std::max(biggest, std::fabs(path[level[i]] - path[level[i - 1]]));
    }
    if (biggest == 0.0 || !std::isfinite(biggest)) return biggest;
    double acc = 0.0;
    for (std::size_t i = 1; i < level.size(); ++i) {
        const double d = std::fabs(path[level[i]] - path[level[i - 1]]) / biggest;
        acc += p == 1.0 ? d : std::pow(d, p);
    }
    return biggest * (p == 1.0 ? acc : std::pow(acc, 1.0 / p));
}

void validate_levels(std::size_t dim, const PVariation& pv) {
    if (!(pv.p >= 1.0) || !std::isfinite(pv.p)) throw DomainError("p_variation: p must be a finite number >= 1");
    if (pv.levels.empty()) throw EmptySubdivision("p_variation: no subdivision levels given");
    const std::vector<std::size_t>* previous = nullptr;
    for (std::size_t n = 0; n < pv.levels.size(); ++n) {
        const auto& level = pv.levels[n];
        const std::string where = "p_variation: level " + std::to_string(n);
        if (level.empty()) throw EmptySubdivision(where + " is empty");
        if (level.front() != 0 || level.back() != dim - 1) {
            throw DomainError(where + " must start at the first and end at the last index of T");
        }
        if (dim > 1 && level.size() < 2) throw EmptySubdivision(where + " has no increments");
        for (std::size_t i = 1; i < level.size(); ++i) {
            if (level[i] <= level[i - 1]) throw DomainError(where + " is not strictly increasing");
        }
        if (previous != nullptr && !std::includes(level.begin(), level.end(), previous->begin(), previous->end())) {
            throw DomainError(where + " does not refine the previous level");
        }
        previous = &level;
    }
}

/// Points of {-n..n}^k with max |c_i| = n whose first nonzero entry is positive.
std::vector<std::vector<int>> cube_surface(std::size_t k, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> c(k, -n);
    while (true) {
        int top = 0;
        int first = 0;
        for (int v : c) {
            top = std::max(top, std::abs(v));
            if (first == 0) first = v;
        }
        if (top == n && first > 0) out.push_back(c);
        std::size_t i = 0;
        while (i < k && c[i] == n) c[i++] = -n;
        if (i == k) break;
        ++c[i];
    }
    return out;
}

/// sum_i w_i (x(t_i) - x(t_{i-1})) as weights on positions.
LinearFunctional increment_functional(const std::vector<std::size_t>& level, const std::vector<double>& w) {
    std::vector<double> dense(level.back() + 1, 0.0);
    for (std::size_t i = 1; i < level.size(); ++i) {
        dense[level[i]] += w[i - 1];
        dense[level[i - 1]] -= w[i - 1];
    }
    LinearFunctional f;
    for (std::size_t pos = 0; pos < dense.size(); ++pos) {
        if (dense[pos] != 0.0) f.weights.emplace_back(pos, dense[pos]);
    }
    return f;
}

}  // namespace

double LinearFunctional::apply(const Path& path) const {
    double acc = 0.0;
    for (const auto& [pos, w] : weights) {
        if (pos >= path.size()) throw DimensionMismatch("functional: index outside the path");
        acc += w * path[pos];
    }
    return acc;
}

PseudoSeminormSpec::PseudoSeminormSpec(std::size_t dim, SeminormVariant variant)
    : dim_(dim), variant_(std::move(variant)) {
    if (dim_ == 0) throw DomainError("seminorm: T must be nonempty");
    if (const auto* pv = std::get_if<PVariation>(&variant_)) validate_levels(dim_, *pv);
    if (const auto* fs = std::get_if<FunctionalSup>(&variant_)) {
        for (const auto& f : fs->functionals) {
            for (const auto& [pos, w] : f.weights) {
                if (pos >= dim_) throw DomainError("functional_sup: weight on an index outside T");
                if (!std::isfinite(w)) throw DomainError("functional_sup: weights must be finite");
            }
        }
    }
}

PseudoSeminormSpec PseudoSeminormSpec::sup(std::size_t dim) { return {dim, SupNorm{}}; }

PseudoSeminormSpec PseudoSeminormSpec::p_variation(std::size_t dim, double p,
                                                   std::vector<std::vector<std::size_t>> levels) {
    return {dim, PVariation{p, std::move(levels)}};
}

PseudoSeminormSpec PseudoSeminormSpec::dyadic_p_variation(std::size_t dim, double p) {
    return p_variation(dim, p, dyadic_levels(dim));
}

PseudoSeminormSpec PseudoSeminormSpec::functional_sup(std::size_t dim, std::vector<LinearFunctional> functionals) {
    return {dim, FunctionalSup{std::move(functionals)}};
}

std::vector<std::vector<std::size_t>> dyadic_levels(std::size_t dim) {
    if (dim == 0) throw DomainError("dyadic_levels: T must be nonempty");
    if (dim == 1) return {{0}};
    const double span = static_cast<double>(dim - 1);
    std::vector<std::vector<std::size_t>> levels;
    for (std::size_t parts = 1;; parts *= 2) {
        std::vector<std::size_t> level;
        for (std::size_t i = 0; i <= parts; ++i) {
            const auto pos = static_cast<std::size_t>(std::llround(span * static_cast<double>(i) / static_cast<double>(parts)));
            if (level.empty() || level.back() != pos) level.push_back(pos);
        }
        levels.push_back(std::move(level));
        if (levels.back().size() == dim) break;
    }
    return levels;
}

std::vector<double> variation_by_level(const PVariation& pv, const Path& path) {
    std::vector<double> out;
    out.reserve(pv.levels.size());
    for (const auto& level : pv.levels) out.push_back(level_sum(level, pv.p, path));
    return out;
}

double eval_seminorm(const PseudoSeminormSpec& spec, const Path& path) {
    check_dim(spec.dim(), path);
    for (double v : path) {
        if (std::isnan(v)) throw DomainError("seminorm: path contains NaN");
    }
    return std::visit(
        [&path](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            double best = 0.0;
            if constexpr (std::is_same_v<S, SupNorm>) {
                for (double v : path) best = std::max(best, std::fabs(v));
            } else if constexpr (std::is_same_v<S, PVariation>) {
                for (const auto& level : s.levels) best = std::max(best, level_sum(level, s.p, path));
            } else {
                for (const auto& f : s.functionals) best = std::max(best, std::fabs(f.apply(path)));
            }
            return std::isnan(best) ? kInfiniteSeminorm : best;
        },
        spec.variant());
}

FunctionalFamily functional_representation(const PseudoSeminormSpec& spec, double resolution,
                                           std::size_t max_functionals) {
    FunctionalFamily family;
    if (std::holds_alternative<FunctionalSup>(spec.variant())) {
        throw DomainError("functional_representation: input is already a functional family");
    }
    if (std::holds_alternative<SupNorm>(spec.variant())) {
        for (std::size_t t = 0; t < spec.dim(); ++t) {
            family.functionals.push_back({{{t, 1.0}}});
            family.functionals.push_back({{{t, -1.0}}});
        }
        return family;
    }
    const auto& pv = std::get<PVariation>(spec.variant());
    if (spec.dim() == 1) return family;

    if (pv.p == 1.0) {
        // l1 duality: all sign vectors on the increments of each level.
        for (const auto& level : pv.levels) {
            const std::size_t k = level.size() - 1;
            if (k >= 31 || (std::size_t{1} << k) > max_functionals) {
                throw DomainError("functional_representation: too many increments for sign patterns");
            }
            std::vector<double> w(k);
            for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
                for (std::size_t i = 0; i < k; ++i) w[i] = ((mask >> i) & 1U) != 0U ? -1.0 : 1.0;
                family.functionals.push_back(increment_functional(level, w));
            }
        }
        return family;
    }

    if (!(resolution > 0.0 && resolution <= 1.0)) throw DomainError("functional_representation: bad resolution");
    const int n = std::max(1, static_cast<int>(std::lround(1.0 / resolution)));
    const double dual = pv.p / (pv.p - 1.0);
    double worst = 0.0;
    for (const auto& level : pv.levels) {
        const std::size_t k = level.size() - 1;
        const double count = std::pow(2.0 * n + 1.0, static_cast<double>(k)) - std::pow(2.0 * n - 1.0, static_cast<double>(k));
        if (count + static_cast<double>(family.functionals.size()) > static_cast<double>(max_functionals)) {
            throw DomainError("functional_representation: dual mesh for " + std::to_string(k) +
                              " increments exceeds the functional budget");
        }
        std::vector<double> w(k);
        for (const auto& c : cube_surface(k, n)) {
            double norm = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                w[i] = static_cast<double>(c[i]) / n;
                norm += std::pow(std::fabs(w[i]), dual);
            }
            norm = std::pow(norm, 1.0 / dual);
            for (auto& v : w) v /= norm;
            family.functionals.push_back(increment_functional(level, w));
        }
        const double a = 0.5 / n * std::pow(static_cast<double>(k), 1.0 / dual);
        worst = std::max(worst, a < 1.0 ? (1.0 + a) / (1.0 - a) - 1.0 : kInfiniteSeminorm);
    }
    family.tolerance = worst;
    family.resolution = 1.0 / n;
    return family;
}

}  // namespace chaoslab
