#include "chaoslab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "chaoslab/errors.hpp"
#include "chaoslab/special.hpp"

#ifndef CHAOSLAB_VERSION
#define CHAOSLAB_VERSION "0.0.0"
#endif

namespace chaoslab::cli {

using io::FieldError;
using io::Json;

namespace {

const std::vector<std::string> kParamNames{"mean", "variance", "rate", "shape", "alpha", "scale",
                                           "mu",   "lambda",   "delta", "value", "a",     "b"};

// Keys every config may carry; none of them reaches the report.
const std::set<std::string> kEnvelopeKeys{"command", "seed", "threads", "output", "format"};

void check_allowed(const Json& raw, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : raw.items()) {
        if (!allowed.count(key) && !kEnvelopeKeys.count(key)) throw FieldError(key, "unknown field");
    }
}

bool get_bool_or(const Json& j, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw FieldError(key, "expected true or false");
    return j.at(key).get<bool>();
}

std::size_t get_count_or(const Json& j, const std::string& key, std::size_t fallback, std::size_t minimum = 1) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
        throw FieldError(key, "expected an integer >= " + std::to_string(minimum));
    }
    return v.get<std::size_t>();
}

std::string get_string_or(const Json& j, const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) throw FieldError(key, "expected a string");
    return j.at(key).get<std::string>();
}

std::vector<double> positive_list(const Json& v, const std::string& where) {
    auto out = io::number_list(v, where);
    for (double x : out) {
        if (!(x > 0.0)) throw FieldError(where, "values must be positive");
    }
    return out;
}

/// A value given inline, as inline JSON text, or as a path to a JSON file.
Json load_ref(const Json& v, const std::string& where) {
    if (!v.is_string()) return v;
    const std::string s = v.get<std::string>();
    const auto first = s.find_first_not_of(" \t\r\n");
    try {
        if (first != std::string::npos && (s[first] == '{' || s[first] == '[')) return io::parse_json(s);
        if (!std::filesystem::is_regular_file(s)) throw FieldError(where, "cannot read '" + s + "'");
        return io::read_json_file(s);
    } catch (const ParseError& e) {
        throw FieldError(where, std::string(e.what()) + " at line " + std::to_string(e.line()) + ", column " +
                                    std::to_string(e.column()));
    }
}

Json levy_preset(const std::string& name) {
    if (name == "unit_jump") {
        return Json{{"gaussian_variance", 0.0},
                    {"drift", 0.0},
                    {"jumps", {{"kind", "atomic"}, {"atoms", Json::array({{{"size", 1.0}, {"rate", 0.5}}, {{"size", -1.0}, {"rate", 0.5}}})}}}};
    }
    if (name == "brownian") return Json{{"gaussian_variance", 1.0}, {"drift", 0.0}, {"jumps", {{"kind", "none"}}}};
    if (name == "power_law") {
        return Json{{"gaussian_variance", 0.0},
                    {"drift", 0.0},
                    {"jumps", {{"kind", "truncated_power_law"}, {"c", 1.0}, {"alpha", 1.0}, {"cutoff", 1.0}}}};
    }
    return nullptr;
}

// --- resolution ---------------------------------------------------------------------------

Json resolve_distribution(const Json& raw) {
    Json dist{{"family", io::need(raw, "family", "")}};
    if (raw.contains("params")) dist["params"] = raw.at("params");
    return io::to_json(io::distribution_from_json(dist, ""));
}

Json resolve_check_cq(const Json& raw) {
    check_allowed(raw, {"family", "params", "q", "scales", "c_level", "s_multipliers", "beta2_cap", "beta1_floor",
                        "curves", "moment_check"});
    Json out = resolve_distribution(raw);
    const double q = io::get_number(raw, "q", "");
    if (!(q > 0.0)) throw FieldError("q", "must be positive");
    out["q"] = q;
    if (raw.contains("scales")) {
        out["scales"] = positive_list(raw.at("scales"), "scales");
    } else {
        // a single scale cannot show growth as m -> 0
        const auto fam = out.at("family").get<std::string>();
        const bool divisible = fam != "rademacher" && fam != "uniform" && fam != "pareto";
        out["scales"] = divisible ? std::vector<double>{1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5} : std::vector<double>{1.0};
    }
    const CqConfig defaults;
    const double c_level = io::get_number_or(raw, "c_level", "", defaults.c_level);
    if (!(c_level > 0.0 && c_level < 1.0)) throw FieldError("c_level", "must lie in (0, 1)");
    out["c_level"] = c_level;
    auto mult = raw.contains("s_multipliers") ? positive_list(raw.at("s_multipliers"), "s_multipliers")
                                              : defaults.s_multipliers;
    if (mult.empty() || mult.front() != 1.0 || !std::is_sorted(mult.begin(), mult.end()) ||
        std::adjacent_find(mult.begin(), mult.end()) != mult.end()) {
        throw FieldError("s_multipliers", "must start at 1 and increase strictly");
    }
    out["s_multipliers"] = mult;
    out["beta2_cap"] = io::get_number_or(raw, "beta2_cap", "", defaults.beta2_cap);
    out["beta1_floor"] = io::get_number_or(raw, "beta1_floor", "", defaults.beta1_floor);
    out["curves"] = get_bool_or(raw, "curves", true);
    if (raw.contains("moment_check") && !raw.at("moment_check").is_null()) {
        const Json& mc = raw.at("moment_check");
        if (!mc.is_object()) throw FieldError("moment_check", "expected an object");
        const double p = io::get_number_or(mc, "p", "moment_check", q / 2.0);
        if (!(p > 0.0 && p < q)) throw FieldError("moment_check.p", "must lie in (0, q)");
        std::size_t n = 1000000;
        if (mc.contains("n")) {
            if (!mc.at("n").is_number_integer() || mc.at("n").get<long long>() < 2) {
                throw FieldError("moment_check.n", "expected an integer >= 2");
            }
            n = mc.at("n").get<std::size_t>();
        }
        out["moment_check"] = Json{{"p", p}, {"n", n}};
    } else {
        out["moment_check"] = nullptr;
    }
    return out;
}

Json resolve_check_cinf(const Json& raw) {
    check_allowed(raw, {"family", "params", "scales", "laws"});
    Json laws = Json::array();
    if (raw.contains("laws")) {
        if (raw.contains("family")) throw FieldError("laws", "give either laws or family, not both");
        const Json& l = raw.at("laws");
        if (!l.is_array() || l.empty()) throw FieldError("laws", "expected a nonempty array");
        for (std::size_t i = 0; i < l.size(); ++i) {
            laws.push_back(io::to_json(io::distribution_from_json(l[i], "laws[" + std::to_string(i) + "]")));
        }
        return Json{{"laws", laws}};
    }
    Json out = resolve_distribution(raw);
    out["scales"] = raw.contains("scales") ? positive_list(raw.at("scales"), "scales") : std::vector<double>{};
    return out;
}

/// Either "process" or "integral_process", expanded.
void resolve_process(const Json& raw, Json& out) {
    const bool has_p = raw.contains("process");
    const bool has_i = raw.contains("integral_process");
    if (has_p == has_i) throw FieldError("process", "give exactly one of process or integral_process");
    if (has_p) {
        out["process"] = io::to_json(io::process_from_json(load_ref(raw.at("process"), "process"), "process"));
    } else {
        Json ip = load_ref(raw.at("integral_process"), "integral_process");
        io::integral_grid_from_json(ip, "integral_process");
        out["integral_process"] = ip;
    }
}

ChaosProcessSpec process_of(const Json& resolved) {
    if (resolved.contains("process")) return io::process_from_json(resolved.at("process"), "process");
    return integral_process_chaos(io::integral_grid_from_json(resolved.at("integral_process"), "integral_process"));
}

std::vector<std::string> labels_of(const Json& resolved) {
    const Json& src = resolved.contains("process") ? resolved.at("process") : resolved.at("integral_process");
    return src.at("T").get<std::vector<std::string>>();
}

Json resolve_seminorm(const Json& raw, const std::vector<std::string>& T) {
    const Json s = raw.contains("seminorm") ? load_ref(raw.at("seminorm"), "seminorm") : Json{{"kind", "sup"}};
    return io::seminorm_to_json(io::seminorm_from_json(s, T, "seminorm"), T);
}

Json resolve_equivalence(const Json& raw) {
    const std::string mode = get_string_or(raw, "mode", "ratio");
    Json out{{"mode", mode}};
    if (mode == "ratio") {
        check_allowed(raw, {"mode", "process", "integral_process", "seminorm", "p", "r", "regime", "beta3", "n_paths",
                            "resamples"});
        resolve_process(raw, out);
        out["seminorm"] = resolve_seminorm(raw, labels_of(out));
        const double p = io::get_number_or(raw, "p", "", 2.0);
        const double r = io::get_number_or(raw, "r", "", 4.0);
        if (!(p > 0.0 && r > p)) throw FieldError("r", "need 0 < p < r");
        out["p"] = p;
        out["r"] = r;
        const std::string regime = get_string_or(raw, "regime", "gaussian_chaos");
        try {
            out["regime"] = std::string(to_string(regime_from_string(regime)));
        } catch (const Error&) {
            throw FieldError("regime", "unknown '" + regime + "'");
        }
        if (raw.contains("beta3") && !raw.at("beta3").is_null()) {
            const double b = io::get_number(raw, "beta3", "");
            if (!(b >= 1.0)) throw FieldError("beta3", "must be >= 1");
            out["beta3"] = b;
        } else {
            out["beta3"] = nullptr;
        }
        out["n_paths"] = get_count_or(raw, "n_paths", 100000, 2);
        out["resamples"] = get_count_or(raw, "resamples", kBootstrapResamples, 2);
        return out;
    }
    if (mode == "exp-moment") {
        check_allowed(raw, {"mode", "process", "integral_process", "seminorm", "beta3", "epsilon", "epsilon_factor",
                            "n_paths"});
        resolve_process(raw, out);
        out["seminorm"] = resolve_seminorm(raw, labels_of(out));
        if (raw.contains("beta3") && !raw.at("beta3").is_null()) {
            const double b = io::get_number(raw, "beta3", "");
            if (!(b >= 1.0)) throw FieldError("beta3", "must be >= 1");
            out["beta3"] = b;
        } else {
            std::vector<DistributionSpec> laws;
            const auto spec = process_of(out);
            for (std::size_t i = 1; i <= spec.poly.variables(); ++i) laws.push_back(spec.driver.law_of(i));
            const double b = check_cinf(laws).beta3;
            if (!std::isfinite(b)) throw FieldError("beta3", "required: the driver laws are unbounded");
            out["beta3"] = b;
        }
        if (raw.contains("epsilon") && raw.contains("epsilon_factor")) {
            throw FieldError("epsilon", "give either epsilon or epsilon_factor");
        }
        if (raw.contains("epsilon")) {
            const double e = io::get_number(raw, "epsilon", "");
            if (!(e > 0.0)) throw FieldError("epsilon", "must be positive");
            out["epsilon"] = e;
        } else {
            const double f = io::get_number_or(raw, "epsilon_factor", "", 0.5);
            if (!(f > 0.0)) throw FieldError("epsilon_factor", "must be positive");
            out["epsilon_factor"] = f;
        }
        out["n_paths"] = get_count_or(raw, "n_paths", 1000000, 2);
        return out;
    }
    throw FieldError("mode", "unknown '" + mode + "'");
}

Json resolve_genarg(const Json& raw) {
    if (raw.contains("curve")) {
        check_allowed(raw, {"curve", "seminorm", "T", "grid_size"});
        const auto curve = io::curve_from_json(load_ref(raw.at("curve"), "curve"), "curve");
        std::vector<std::string> T;
        if (raw.contains("T")) {
            T = raw.at("T").get<std::vector<std::string>>();
            if (T.size() != curve.width()) throw FieldError("T", "length differs from the curve width");
        } else {
            for (std::size_t i = 1; i <= curve.width(); ++i) T.push_back("t" + std::to_string(i));
        }
        Json out{{"curve", io::to_json(curve)}, {"T", T}};
        out["seminorm"] = resolve_seminorm(raw, T);
        const std::size_t g = get_count_or(raw, "grid_size", 1001, 101);
        if (g % 2 == 0) throw FieldError("grid_size", "must be odd");
        out["grid_size"] = g;
        return out;
    }
    check_allowed(raw, {"corpus", "n", "dmax", "dim", "eps_min", "eps_max", "grid_size", "rows"});
    const std::string corpus = get_string_or(raw, "corpus", "random");
    if (corpus != "random") throw FieldError("corpus", "unknown '" + corpus + "'");
    const CorpusConfig d;
    Json out{{"corpus", corpus}};
    out["n"] = get_count_or(raw, "n", d.n);
    out["dmax"] = get_count_or(raw, "dmax", static_cast<std::size_t>(d.dmax));
    out["dim"] = get_count_or(raw, "dim", d.dim, 2);
    const double lo = io::get_number_or(raw, "eps_min", "", d.eps_min);
    const double hi = io::get_number_or(raw, "eps_max", "", d.eps_max);
    if (!(lo > 0.0 && hi > lo)) throw FieldError("eps_max", "need 0 < eps_min < eps_max");
    out["eps_min"] = lo;
    out["eps_max"] = hi;
    const std::size_t g = get_count_or(raw, "grid_size", d.grid_size, 101);
    if (g % 2 == 0) throw FieldError("grid_size", "must be odd");
    out["grid_size"] = g;
    out["rows"] = get_bool_or(raw, "rows", false);
    return out;
}

Json resolve_levy(const Json& raw) {
    check_allowed(raw, {"model", "t_grid", "psi_bound", "rel_tol", "frequency_span"});
    const Json& m = io::need(raw, "model", "");
    Json model = m.is_string() ? levy_preset(m.get<std::string>()) : Json(nullptr);
    if (model.is_null()) model = load_ref(m, "model");
    Json out{{"model", io::to_json(io::levy_from_json(model, "model"))}};
    auto grid = raw.contains("t_grid") ? positive_list(raw.at("t_grid"), "t_grid")
                                       : std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4};
    if (grid.empty()) throw FieldError("t_grid", "expected a nonempty array");
    out["t_grid"] = grid;
    out["psi_bound"] = get_bool_or(raw, "psi_bound", false);
    const L1Config d;
    out["rel_tol"] = io::get_number_or(raw, "rel_tol", "", d.rel_tol);
    out["frequency_span"] = io::get_number_or(raw, "frequency_span", "", d.frequency_span);
    return out;
}

Json resolve_simulate(const Json& raw) {
    check_allowed(raw, {"process", "integral_process", "n_paths", "seminorm"});
    Json out = Json::object();
    resolve_process(raw, out);
    out["n_paths"] = get_count_or(raw, "n_paths", 10);
    out["seminorm"] = raw.contains("seminorm") ? resolve_seminorm(raw, labels_of(out)) : Json(nullptr);
    return out;
}

Json resolve_tail_index(const Json& raw) {
    check_allowed(raw, {"family", "params", "s_grid", "s_min", "s_max", "points", "curvature_threshold"});
    Json out = resolve_distribution(raw);
    const auto spec = io::distribution_from_json(out, "");
    std::vector<double> grid;
    if (raw.contains("s_grid")) {
        if (raw.contains("s_min") || raw.contains("s_max") || raw.contains("points")) {
            throw FieldError("s_grid", "give either s_grid or s_min/s_max/points");
        }
        grid = positive_list(raw.at("s_grid"), "s_grid");
    } else {
        double lo = raw.contains("s_min") ? io::get_number(raw, "s_min", "") : abs_quantile(spec, 0.5);
        if (!(lo > 0.0)) lo = 1.0;
        double hi = raw.contains("s_max") ? io::get_number(raw, "s_max", "") : lo * 1e3;
        if (!raw.contains("s_max") && tail_prob(spec, hi) < 1e-280) {
            // Largest s above the underflow floor, then two decades below it.
            double a = std::log(lo);
            double b = std::log(hi);
            for (int i = 0; i < 60; ++i) {
                const double mid = 0.5 * (a + b);
                (tail_prob(spec, std::exp(mid)) >= 1e-280 ? a : b) = mid;
            }
            hi = std::exp(a);
            if (!raw.contains("s_min")) lo = std::min(lo, hi / 100.0);
        }
        if (!(lo > 0.0 && hi > lo)) throw FieldError("s_max", "need 0 < s_min < s_max");
        grid = geometric_grid(lo, hi, get_count_or(raw, "points", 25, 4));
    }
    out["s_grid"] = grid;
    out["curvature_threshold"] = io::get_number_or(raw, "curvature_threshold", "", 0.3);
    return out;
}

Json resolve_bessel(const Json& raw) {
    check_allowed(raw, {"z", "scaled"});
    auto z = positive_list(io::need(raw, "z", ""), "z");
    if (z.empty()) throw FieldError("z", "expected a nonempty array");
    return Json{{"z", z}, {"scaled", get_bool_or(raw, "scaled", false)}};
}

// --- execution ----------------------------------------------------------------------------

std::uint64_t seed_of(const Json& resolved) { return resolved.at("seed").get<std::uint64_t>(); }

Outcome run_check_cq(const Json& c) {
    const auto base = io::distribution_from_json(c, "");
    const double q = c.at("q").get<double>();
    CqConfig config;
    config.c_level = c.at("c_level").get<double>();
    config.s_multipliers = c.at("s_multipliers").get<std::vector<double>>();
    config.beta2_cap = c.at("beta2_cap").get<double>();
    config.beta1_floor = c.at("beta1_floor").get<double>();
    const ScaleFamily family{base, c.at("scales").get<std::vector<double>>()};
    const CqReport report = check_cq(family, q, config);
    Outcome o;
    o.result = io::to_json(report, c.at("curves").get<bool>());
    o.status = report.verdict == Verdict::FailDivergent ? kExitFail : kExitOk;
    if (!c.at("moment_check").is_null() && report.verdict == Verdict::Pass) {
        const double p = c.at("moment_check").at("p").get<double>();
        const std::size_t n = c.at("moment_check").at("n").get<std::size_t>();
        const double bound = moment_ratio_bound(report.beta1_min, report.beta2_max, p, q);
        Json rows = Json::array();
        bool all = true;
        for (std::size_t i = 0; i < report.scales.size(); ++i) {
            const auto& s = report.scales[i];
            const auto draws = sample(family.law_at(s.m), derive_seed(seed_of(c), i), n);
            const LpRatio r = lp_ratio_delta(draws, q, p);
            const bool pass = r.ratio <= bound * (1.0 + 3.0 * r.rel_stderr);
            all = all && pass;
            rows.push_back(Json{{"m", io::number(s.m)},
                                {"ratio", io::number(r.ratio)},
                                {"rel_stderr", io::number(r.rel_stderr)},
                                {"bound", io::number(bound)},
                                {"pass", pass}});
        }
        o.result["moment_check"] = Json{{"p", p}, {"n", n}, {"pass", all}, {"scales", rows}};
        if (!all) o.status = kExitFail;
    }
    return o;
}

Outcome run_check_cinf(const Json& c) {
    std::vector<DistributionSpec> laws;
    if (c.contains("laws")) {
        for (const auto& l : c.at("laws")) laws.push_back(io::distribution_from_json(l, "laws"));
    } else {
        const ScaleFamily family{io::distribution_from_json(c, ""), c.at("scales").get<std::vector<double>>()};
        if (family.scales.empty()) {
            laws.push_back(family.base);
        } else {
            for (double m : family.scales) laws.push_back(family.law_at(m));
        }
    }
    const CinfReport report = check_cinf(laws);
    return {io::to_json(report), report.verdict == Verdict::FailDivergent ? kExitFail : kExitOk};
}

std::vector<double> seminorm_values(const Matrix& paths, const PseudoSeminormSpec& seminorm) {
    std::vector<double> values(paths.rows());
    Path row(paths.cols());
    for (std::size_t i = 0; i < paths.rows(); ++i) {
        const auto r = paths.row(i);
        std::copy(r.begin(), r.end(), row.begin());
        values[i] = eval_seminorm(seminorm, row);
    }
    return values;
}

Outcome run_equivalence(const Json& c) {
    const auto spec = process_of(c);
    const auto seminorm = io::seminorm_from_json(c.at("seminorm"), spec.T, "seminorm");
    const std::uint64_t seed = seed_of(c);
    if (c.at("mode") == "ratio") {
        EquivalenceConfig config;
        config.p = c.at("p").get<double>();
        config.r = c.at("r").get<double>();
        config.regime = regime_from_string(c.at("regime").get<std::string>());
        if (!c.at("beta3").is_null()) config.beta3 = c.at("beta3").get<double>();
        config.n_paths = c.at("n_paths").get<std::size_t>();
        config.resamples = c.at("resamples").get<std::size_t>();
        const auto report = verify_equivalence(spec, seminorm, config, seed);
        return {io::to_json(report), report.pass ? kExitOk : kExitFail};
    }
    const int d = static_cast<int>(spec.poly.order());
    const double beta3 = c.at("beta3").get<double>();
    const std::size_t n = c.at("n_paths").get<std::size_t>();
    const auto values = seminorm_values(sample_paths(spec, seed, n), seminorm);
    std::vector<double> norms;
    for (int k = 1; k <= d; ++k) {
        const double p = 2.0 * k / d;
        double acc = 0.0;
        for (double v : values) acc += std::pow(std::abs(v), p);
        norms.push_back(std::pow(acc / static_cast<double>(n), 1.0 / p));
    }
    double acc2 = 0.0;
    for (double v : values) acc2 += v * v;
    const double norm2 = std::sqrt(acc2 / static_cast<double>(n));
    const double threshold = exp_integrability_threshold(d, beta3, norm2);
    const double epsilon = c.contains("epsilon") ? c.at("epsilon").get<double>()
                                                 : c.at("epsilon_factor").get<double>() * threshold;
    const SeriesBound bound = exp_moment_series_bound(epsilon, d, beta3, norms, norm2);
    // Welford on exp(eps N^{2/d}).
    double m = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::exp(epsilon * std::pow(std::abs(values[i]), 2.0 / d));
        const double delta = x - m;
        m += delta / static_cast<double>(i + 1);
        s2 += delta * (x - m);
    }
    const double se = std::sqrt(s2 / static_cast<double>(n - 1) / static_cast<double>(n));
    Outcome o;
    o.result = Json{{"d", d},
                    {"beta3", io::number(beta3)},
                    {"norm2", io::number(norm2)},
                    {"threshold", io::number(threshold)},
                    {"epsilon", io::number(epsilon)},
                    {"mc_mean", io::number(m)},
                    {"mc_stderr", io::number(se)},
                    {"mc_finite", std::isfinite(m)}};
    if (bound.diverges) {
        o.result["series_bound"] = "DIVERGES";
        o.result["terms"] = bound.terms;
        o.result["pass"] = true;
    } else {
        const bool pass = std::isfinite(m) && m - 3.0 * se <= bound.value;
        o.result["series_bound"] = io::number(bound.value);
        o.result["terms"] = bound.terms;
        o.result["pass"] = pass;
        o.status = pass ? kExitOk : kExitFail;
    }
    return o;
}

Outcome run_genarg(const Json& c) {
    if (c.contains("curve")) {
        const auto curve = io::curve_from_json(c.at("curve"), "curve");
        const auto T = c.at("T").get<std::vector<std::string>>();
        const auto seminorm = io::seminorm_from_json(c.at("seminorm"), T, "seminorm");
        const std::size_t g = c.at("grid_size").get<std::size_t>();
        const auto a = verify_genarg(curve, seminorm, g);
        const auto b = leading_coeff_bound_check(curve, seminorm, g);
        return {Json{{"genarg", io::to_json(a)}, {"leading_coeff", io::to_json(b)}, {"pass", a.pass && b.pass}},
                a.pass && b.pass ? kExitOk : kExitFail};
    }
    CorpusConfig config;
    config.n = c.at("n").get<std::size_t>();
    config.dmax = c.at("dmax").get<int>();
    config.dim = c.at("dim").get<std::size_t>();
    config.eps_min = c.at("eps_min").get<double>();
    config.eps_max = c.at("eps_max").get<double>();
    config.grid_size = c.at("grid_size").get<std::size_t>();
    const auto corpus = run_genarg_corpus(config, seed_of(c));
    const bool all = corpus.genarg_pass == config.n && corpus.leading_pass == config.n;
    Json result = io::to_json(corpus, c.at("rows").get<bool>());
    result["pass"] = all;
    return {result, all ? kExitOk : kExitFail};
}

Outcome run_levy(const Json& c) {
    const auto model = io::levy_from_json(c.at("model"), "model");
    L1Config config;
    config.rel_tol = c.at("rel_tol").get<double>();
    config.frequency_span = c.at("frequency_span").get<double>();
    const auto grid = c.at("t_grid").get<std::vector<double>>();
    const auto rows = moment_ratio_curve(model, grid, config);
    Json out_rows = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Json row = io::to_json(rows[i]);
        row["l2_squared_over_t"] = io::number(rows[i].l2 * rows[i].l2 / rows[i].t);
        row["l1_over_sqrt_t"] = io::number(rows[i].l1 / std::sqrt(rows[i].t));
        if (c.at("psi_bound").get<bool>()) row["psi_bound"] = io::to_json(l1_upper_bound_psi(model, rows[i].t, config));
        out_rows.push_back(row);
    }
    return {Json{{"model", model.describe()}, {"rows", out_rows}}, kExitOk};
}

Outcome run_simulate(const Json& c) {
    const std::size_t n = c.at("n_paths").get<std::size_t>();
    Matrix paths;
    std::vector<std::string> T;
    if (c.contains("process")) {
        const auto spec = io::process_from_json(c.at("process"), "process");
        T = spec.T;
        paths = sample_paths(spec, seed_of(c), n);
    } else {
        const auto grid = io::integral_grid_from_json(c.at("integral_process"), "integral_process");
        T = grid.T;
        paths = discretize_integral_process(grid, seed_of(c), n);
    }
    Json rows = Json::array();
    for (std::size_t i = 0; i < paths.rows(); ++i) {
        Json row = Json::array();
        for (double v : paths.row(i)) row.push_back(io::number(v));
        rows.push_back(row);
    }
    Json result{{"T", T}, {"paths", rows}};
    if (!c.at("seminorm").is_null()) {
        const auto seminorm = io::seminorm_from_json(c.at("seminorm"), T, "seminorm");
        Json values = Json::array();
        for (double v : seminorm_values(paths, seminorm)) values.push_back(io::number(v));
        result["seminorm_values"] = values;
    }
    return {result, kExitOk};
}

Outcome run_tail_index(const Json& c) {
    const auto spec = io::distribution_from_json(c, "");
    const auto r = tail_index_estimate(spec, c.at("s_grid").get<std::vector<double>>(),
                                       c.at("curvature_threshold").get<double>());
    return {io::to_json(r), kExitOk};
}

Outcome run_bessel(const Json& c) {
    const bool scaled = c.at("scaled").get<bool>();
    Json rows = Json::array();
    for (double z : c.at("z").get<std::vector<double>>()) {
        rows.push_back(Json{{"z", z}, {"k1", io::number(scaled ? bessel_k1_scaled(z) : bessel_k1(z))}});
    }
    return {Json{{"values", rows}}, kExitOk};
}

// --- rendering ------------------------------------------------------------------------------

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  // shown below the table, not in CSV
};

std::string cell(const Json& v) {
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) return io::format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "";
    return v.dump();
}

std::string short_cell(const Json& v) {
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
        return buf;
    }
    return cell(v);
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::vector<std::string>>& rows) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten(value, name, rows);
        } else if (value.is_array() && !value.empty() && (value.front().is_object() || value.front().is_array())) {
            continue;
        } else {
            rows.push_back({name, value.is_array() ? value.dump() : cell(value)});
        }
    }
}

Table key_value_table(const Json& result) {
    Table t;
    t.header = {"key", "value"};
    flatten(result, "", t.rows);
    return t;
}

Table make_table(const std::string& command, const Json& config, const Json& result) {
    Table t;
    if (command == "check-cq") {
        t.header = {"scale", "s", "ratio", "tail", "truncated_moment"};
        for (const auto& s : result.at("scales")) {
            if (!s.contains("ratio_curve")) continue;
            for (const auto& p : s.at("ratio_curve")) {
                t.rows.push_back({cell(s.at("m")), cell(p.at("s")), cell(p.at("ratio")), cell(p.at("tail")),
                                  cell(p.at("truncated_moment"))});
            }
        }
        for (const auto& s : result.at("scales")) {
            t.notes.push_back("m=" + short_cell(s.at("m")) + " beta1=" + short_cell(s.at("beta1")) +
                              " beta2=" + short_cell(s.at("beta2")));
        }
        t.notes.push_back("verdict: " + cell(result.at("verdict")));
        if (result.contains("moment_check")) {
            const auto& mc = result.at("moment_check");
            t.notes.push_back("moment check (p=" + short_cell(mc.at("p")) + ", n=" + cell(mc.at("n")) +
                              "): " + (mc.at("pass").get<bool>() ? "PASS" : "FAIL"));
        }
        if (!result.at("diagnostics").get<std::string>().empty()) t.notes.push_back(cell(result.at("diagnostics")));
        return t;
    }
    if (command == "check-cinf") {
        t.header = {"law", "ess_sup", "sd", "ratio"};
        for (const auto& e : result.at("entries")) {
            t.rows.push_back({cell(e.at("law")), cell(e.at("ess_sup")), cell(e.at("sd")), cell(e.at("ratio"))});
        }
        t.notes.push_back("beta3: " + short_cell(result.at("beta3")) + "  verdict: " + cell(result.at("verdict")));
        return t;
    }
    if (command == "levy-ratio") {
        t.header = {"t", "l1", "l2", "ratio"};
        for (const auto& r : result.at("rows")) {
            t.rows.push_back({cell(r.at("t")), cell(r.at("l1")), cell(r.at("l2")), cell(r.at("ratio"))});
        }
        return t;
    }
    if (command == "simulate") {
        t.header = result.at("T").get<std::vector<std::string>>();
        for (const auto& r : result.at("paths")) {
            std::vector<std::string> row;
            for (const auto& v : r) row.push_back(cell(v));
            t.rows.push_back(std::move(row));
        }
        return t;
    }
    if (command == "tail-index") {
        t.header = {"s", "tail"};
        for (const auto& p : result.at("points")) t.rows.push_back({cell(p.at("s")), cell(p.at("tail"))});
        t.notes.push_back("slope: " + short_cell(result.at("slope")) + "  curvature: " +
                          short_cell(result.at("curvature")) + "  " + cell(result.at("flag")));
        return t;
    }
    if (command == "bessel") {
        t.header = {"z", "k1"};
        for (const auto& r : result.at("values")) t.rows.push_back({cell(r.at("z")), cell(r.at("k1"))});
        return t;
    }
    if (command == "genarg" && result.contains("rows")) {
        t.header = {"index", "d", "epsilon", "seminorm", "genarg_lhs", "genarg_rhs", "genarg_pass",
                    "leading_lhs", "leading_rhs", "leading_pass"};
        for (const auto& r : result.at("rows")) {
            const auto& g = r.at("genarg");
            const auto& l = r.at("leading_coeff");
            t.rows.push_back({cell(r.at("index")), cell(r.at("d")), cell(r.at("epsilon")), cell(r.at("seminorm")),
                              cell(g.at("lhs")), cell(g.at("rhs")), cell(g.at("pass")), cell(l.at("lhs")),
                              cell(l.at("rhs")), cell(l.at("pass"))});
        }
        return t;
    }
    (void)config;
    return key_value_table(result);
}

void write_csv(std::ostream& out, const Table& t) {
    io::CsvWriter csv(out);
    csv.row(t.header);
    for (const auto& r : t.rows) csv.row(r);
}

void write_text_table(std::ostream& out, const Table& t) {
    std::vector<std::size_t> width(t.header.size(), 0);
    auto measure = [&width](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
    };
    measure(t.header);
    for (const auto& r : t.rows) measure(r);
    auto line = [&](const std::vector<std::string>& row) {
        std::string s;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) s += "  ";
            s += row[i];
            if (i + 1 < row.size()) s.append(width[i] - row[i].size(), ' ');
        }
        out << s << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    for (const auto& n : t.notes) out << n << '\n';
}

void write_bessel_table(std::ostream& out, const Json& result) {
    for (const auto& r : result.at("values")) {
        const Json& v = r.at("k1");
        if (v.is_number()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10f", v.get<double>());
            out << buf << '\n';
        } else {
            out << cell(v) << '\n';
        }
    }
}

// --- command line -------------------------------------------------------------------------------

struct Flags {
    std::optional<std::uint64_t> seed;
    std::string config_path;
    std::string output;
    std::string format;
    bool dry_run = false;
    std::optional<unsigned> threads;
    Json overrides = Json::object();
};

template <class T>
void bind_option(CLI::App* app, const std::string& flag, const std::string& key, Flags& f, const std::string& help,
          std::vector<std::function<void()>>& commits, std::map<std::string, std::shared_ptr<T>>& store) {
    auto slot = std::make_shared<T>();
    store[flag] = slot;
    auto* opt = app->add_option("--" + flag, *slot, help);
    commits.push_back([opt, slot, key, &f] {
        if (opt->count() > 0) f.overrides[key] = *slot;
    });
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"check-cq", "check-cinf", "equivalence", "genarg",
                                                "levy-ratio", "simulate", "tail-index", "bessel"};
    return names;
}

Json resolve_config(const std::string& command, const Json& raw, bool require_seed) {
    if (!raw.is_object()) throw FieldError("config", "expected a JSON object");
    Json body;
    if (command == "check-cq") {
        body = resolve_check_cq(raw);
    } else if (command == "check-cinf") {
        body = resolve_check_cinf(raw);
    } else if (command == "equivalence") {
        body = resolve_equivalence(raw);
    } else if (command == "genarg") {
        body = resolve_genarg(raw);
    } else if (command == "levy-ratio") {
        body = resolve_levy(raw);
    } else if (command == "simulate") {
        body = resolve_simulate(raw);
    } else if (command == "tail-index") {
        body = resolve_tail_index(raw);
    } else if (command == "bessel") {
        body = resolve_bessel(raw);
    } else {
        throw FieldError("command", "unknown '" + command + "'");
    }
    Json out = Json::object();
    if (command != "bessel") {
        if (raw.contains("seed")) {
            const Json& s = raw.at("seed");
            if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
                throw FieldError("seed", "expected a nonnegative integer");
            }
            out["seed"] = s.get<std::uint64_t>();
        } else if (require_seed) {
            throw FieldError("seed", "required");
        }
    }
    out.update(body);
    return out;
}

std::vector<std::string> validate_config(const Json& config, const std::string& command) {
    std::vector<std::string> errors;
    if (!config.is_object()) return {"config: expected a JSON object"};
    std::string cmd = command;
    if (cmd.empty()) {
        if (!config.contains("command")) return {"command: required"};
        if (!config.at("command").is_string()) return {"command: expected a string"};
        cmd = config.at("command").get<std::string>();
    }
    if (std::find(commands().begin(), commands().end(), cmd) == commands().end()) {
        return {"command: unknown '" + cmd + "'"};
    }
    if (cmd != "bessel" && !config.contains("seed")) errors.push_back("seed: required");
    try {
        resolve_config(cmd, config, false);
    } catch (const FieldError& e) {
        errors.push_back(e.what());
    } catch (const Error& e) {
        errors.push_back(std::string("config: ") + e.what());
    }
    return errors;
}

std::vector<std::string> validate_config(const std::string& path, const std::string& command) {
    return validate_config(io::read_json_file(path), command);
}

Outcome execute(const std::string& command, const Json& resolved) {
    if (command == "check-cq") return run_check_cq(resolved);
    if (command == "check-cinf") return run_check_cinf(resolved);
    if (command == "equivalence") return run_equivalence(resolved);
    if (command == "genarg") return run_genarg(resolved);
    if (command == "levy-ratio") return run_levy(resolved);
    if (command == "simulate") return run_simulate(resolved);
    if (command == "tail-index") return run_tail_index(resolved);
    if (command == "bessel") return run_bessel(resolved);
    throw FieldError("command", "unknown '" + command + "'");
}

Json make_report(const std::string& command, const Json& resolved, const Json& result) {
    return Json{{"schema_version", io::kSchemaVersion},
                {"version", CHAOSLAB_VERSION},
                {"command", command},
                {"config", resolved},
                {"result", result}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical verifiers for chaos processes, moment conditions and Levy small-time dynamics", "chaoslab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", CHAOSLAB_VERSION);

    Flags f;
    std::vector<std::function<void()>> commits;
    std::map<std::string, std::shared_ptr<double>> doubles;
    std::map<std::string, std::shared_ptr<std::string>> strings;
    std::map<std::string, std::shared_ptr<std::size_t>> counts;
    std::map<std::string, std::shared_ptr<std::vector<double>>> lists;
    std::map<std::string, std::shared_ptr<bool>> bools;
    std::map<std::string, std::shared_ptr<double>> params;
    std::vector<std::function<void()>> param_commits;

    auto common = [&](CLI::App* sub, bool seeded) {
        auto* s = sub->add_option("--seed", f.seed, "Random seed");
        if (!seeded) s->description("Accepted for uniformity; unused");
        sub->add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--output,-o", f.output, "Write the report here instead of stdout");
        sub->add_option("--format", f.format, "json, csv or table")
            ->check(CLI::IsMember({"json", "csv", "table"}));
        sub->add_flag("--dry-run", f.dry_run, "Validate and print the resolved plan without computing");
        sub->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
    };
    auto family_flags = [&](CLI::App* sub) {
        bind_option(sub, "family", "family", f, "Distribution family", commits, strings);
        for (const auto& name : kParamNames) {
            auto slot = std::make_shared<double>();
            params[sub->get_name() + "/" + name] = slot;
            auto* opt = sub->add_option("--" + name, *slot, "Family parameter " + name);
            param_commits.push_back([opt, slot, name, &f] {
                if (opt->count() == 0) return;
                if (!f.overrides.contains("params")) f.overrides["params"] = Json::object();
                f.overrides["params"][name] = *slot;
            });
        }
    };
    auto list_flag = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        auto slot = std::make_shared<std::vector<double>>();
        lists[sub->get_name() + "/" + flag] = slot;
        auto* opt = sub->add_option("--" + flag, *slot, help)->delimiter(',');
        commits.push_back([opt, slot, key, &f] {
            if (opt->count() > 0) f.overrides[key] = *slot;
        });
    };

    auto* cq = app.add_subcommand("check-cq", "Check condition C_q over a scale family");
    common(cq, true);
    family_flags(cq);
    bind_option(cq, "q", "q", f, "Moment order", commits, doubles);
    list_flag(cq, "scales", "scales", "Comma separated scales m");
    bind_option(cq, "c-level", "c_level", f, "Quantile level defining c_Z", commits, doubles);
    auto mc_p = std::make_shared<double>();
    auto mc_n = std::make_shared<std::size_t>();
    auto* mc_p_opt = cq->add_option("--moment-p", *mc_p, "Also compare MC ||Z||_q/||Z||_p with the bound");
    auto* mc_n_opt = cq->add_option("--moment-n", *mc_n, "Sample size of the moment comparison");
    commits.push_back([&, mc_p, mc_n, mc_p_opt, mc_n_opt] {
        if (mc_p_opt->count() == 0 && mc_n_opt->count() == 0) return;
        Json mc = Json::object();
        if (mc_p_opt->count() > 0) mc["p"] = *mc_p;
        if (mc_n_opt->count() > 0) mc["n"] = *mc_n;
        f.overrides["moment_check"] = mc;
    });
    bool no_curves = false;
    auto* no_curves_opt = cq->add_flag("--no-curves", no_curves, "Omit ratio curves from the report");
    commits.push_back([&f, no_curves_opt] {
        if (no_curves_opt->count() > 0) f.overrides["curves"] = false;
    });

    auto* cinf = app.add_subcommand("check-cinf", "Check condition C_infinity");
    common(cinf, true);
    family_flags(cinf);
    list_flag(cinf, "scales", "scales", "Comma separated scales m");

    auto* eq = app.add_subcommand("equivalence", "Moment equivalence of N(X) or exponential integrability");
    common(eq, true);
    bind_option(eq, "mode", "mode", f, "ratio or exp-moment", commits, strings);
    bind_option(eq, "process", "process", f, "Chaos process: JSON file or inline JSON", commits, strings);
    bind_option(eq, "integral-process", "integral_process", f, "Integral process grid: JSON file or inline JSON", commits,
         strings);
    bind_option(eq, "seminorm", "seminorm", f, "Seminorm: JSON file or inline JSON", commits, strings);
    bind_option(eq, "p", "p", f, "Lower moment order", commits, doubles);
    bind_option(eq, "r", "r", f, "Upper moment order", commits, doubles);
    bind_option(eq, "regime", "regime", f, "cinfinity or gaussian_chaos", commits, strings);
    bind_option(eq, "beta3", "beta3", f, "C_infinity constant", commits, doubles);
    bind_option(eq, "epsilon", "epsilon", f, "Exponent of the exponential moment", commits, doubles);
    bind_option(eq, "epsilon-factor", "epsilon_factor", f, "Exponent as a multiple of the threshold", commits, doubles);
    bind_option(eq, "n-paths", "n_paths", f, "Monte Carlo paths", commits, counts);
    bind_option(eq, "resamples", "resamples", f, "Bootstrap resamples", commits, counts);

    auto* ga = app.add_subcommand("genarg", "Polynomial curve bounds");
    common(ga, true);
    bind_option(ga, "corpus", "corpus", f, "Random corpus kind (random)", commits, strings);
    bind_option(ga, "curve", "curve", f, "Single curve: JSON file or inline JSON", commits, strings);
    bind_option(ga, "seminorm", "seminorm", f, "Seminorm for --curve", commits, strings);
    bind_option(ga, "n", "n", f, "Corpus size", commits, counts);
    bind_option(ga, "dmax", "dmax", f, "Maximal degree", commits, counts);
    bind_option(ga, "dim", "dim", f, "Index set size", commits, counts);
    bind_option(ga, "eps-min", "eps_min", f, "Smallest epsilon", commits, doubles);
    bind_option(ga, "eps-max", "eps_max", f, "Largest epsilon", commits, doubles);
    bind_option(ga, "grid-size", "grid_size", f, "Odd lambda grid size", commits, counts);
    bool rows_flag = false;
    auto* rows_opt = ga->add_flag("--rows", rows_flag, "Include every corpus row");
    commits.push_back([&f, rows_opt] {
        if (rows_opt->count() > 0) f.overrides["rows"] = true;
    });

    auto* lv = app.add_subcommand("levy-ratio", "Small-time moment ratios of a Levy process");
    common(lv, true);
    bind_option(lv, "model", "model", f, "unit_jump, brownian, power_law, a JSON file or inline JSON", commits, strings);
    list_flag(lv, "t-grid", "t_grid", "Comma separated times");
    bool psi_flag = false;
    auto* psi_opt = lv->add_flag("--psi-bound", psi_flag, "Also report the psi upper bound");
    commits.push_back([&f, psi_opt] {
        if (psi_opt->count() > 0) f.overrides["psi_bound"] = true;
    });

    auto* sim = app.add_subcommand("simulate", "Sample paths of a chaos or integral process");
    common(sim, true);
    bind_option(sim, "process", "process", f, "Chaos process: JSON file or inline JSON", commits, strings);
    bind_option(sim, "integral-process", "integral_process", f, "Integral process grid", commits, strings);
    bind_option(sim, "seminorm", "seminorm", f, "Also evaluate this seminorm on every path", commits, strings);
    bind_option(sim, "n-paths", "n_paths", f, "Number of paths", commits, counts);

    auto* ti = app.add_subcommand("tail-index", "Tail index estimate on a log-log grid");
    common(ti, true);
    family_flags(ti);
    bind_option(ti, "s-min", "s_min", f, "Smallest s", commits, doubles);
    bind_option(ti, "s-max", "s_max", f, "Largest s", commits, doubles);
    bind_option(ti, "points", "points", f, "Grid points", commits, counts);
    list_flag(ti, "s-grid", "s_grid", "Comma separated s values");

    auto* bz = app.add_subcommand("bessel", "Modified Bessel function K_1");
    common(bz, false);
    list_flag(bz, "z", "z", "Comma separated arguments");
    bool scaled = false;
    auto* scaled_opt = bz->add_flag("--scaled", scaled, "Report e^z K_1(z)");
    commits.push_back([&f, scaled_opt] {
        if (scaled_opt->count() > 0) f.overrides["scaled"] = true;
    });

    auto* va = app.add_subcommand("validate", "Validate a config file without running it");
    std::string validate_path;
    std::string validate_command;
    va->add_option("config", validate_path, "Config file")->required();
    va->add_option("--command", validate_command, "Subcommand the config is meant for");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream e_out;
        const int code = app.exit(e, o, e_out);
        out << o.str();
        err << e_out.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    if (command == "validate") {
        try {
            const auto errors = validate_config(validate_path, validate_command);
            for (const auto& e : errors) out << e << '\n';
            return errors.empty() ? kExitOk : kExitUsage;
        } catch (const ParseError& e) {
            err << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << '\n';
            return kExitUsage;
        } catch (const Error& e) {
            err << e.what() << '\n';
            return kExitUsage;
        }
    }

    for (const auto& c : commits) c();
    for (const auto& c : param_commits) c();
    if (f.seed) f.overrides["seed"] = *f.seed;

    Json resolved;
    std::string format;
    try {
        Json raw = Json::object();
        if (!f.config_path.empty()) {
            raw = io::read_json_file(f.config_path);
            if (!raw.is_object()) throw FieldError("config", "expected a JSON object");
            if (raw.contains("command") && raw.at("command") != command) {
                throw FieldError("command", "config is for '" + cell(raw.at("command")) + "'");
            }
        }
        // A family given on the command line replaces the file's parameters.
        if (f.overrides.contains("family") && raw.contains("params") &&
            (!raw.contains("family") || raw.at("family") != f.overrides.at("family"))) {
            raw.erase("params");
        }
        for (const auto& [key, value] : f.overrides.items()) {
            if (key == "params" && raw.contains("params") && raw.at("params").is_object()) {
                raw["params"].update(value);
            } else {
                raw[key] = value;
            }
        }
        format = f.format.empty() ? get_string_or(raw, "format", command == "bessel" ? "table" : "json") : f.format;
        if (format != "json" && format != "csv" && format != "table") throw FieldError("format", "unknown '" + format + "'");
        std::string output = f.output.empty() ? get_string_or(raw, "output", "") : f.output;
        f.output = output;
        if (!output.empty()) {
            const auto parent = std::filesystem::absolute(output).parent_path();
            if (!std::filesystem::is_directory(parent)) throw FieldError("output", "no directory '" + parent.string() + "'");
        }
        if (!f.threads && raw.contains("threads")) {
            const auto n = get_count_or(raw, "threads", 1);
            f.threads = static_cast<unsigned>(n);
        }
        resolved = resolve_config(command, raw);
    } catch (const ParseError& e) {
        err << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const FieldError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const Json::exception& e) {
        err << "config: " << e.what() << '\n';
        return kExitUsage;
    }

    if (f.threads) set_worker_count(*f.threads);

    std::ofstream file;
    if (!f.output.empty()) {
        file.open(f.output, std::ios::binary);
        if (!file) {
            err << "output: cannot open '" << f.output << "'\n";
            return kExitUsage;
        }
    }
    std::ostream& sink = f.output.empty() ? out : file;

    if (f.dry_run) {
        Json plan{{"schema_version", io::kSchemaVersion},
                  {"version", CHAOSLAB_VERSION},
                  {"command", command},
                  {"config", resolved},
                  {"dry_run", true}};
        sink << plan.dump(2) << '\n';
        return kExitOk;
    }

    Outcome outcome;
    try {
        outcome = execute(command, resolved);
    } catch (const FieldError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }

    if (format == "json") {
        sink << make_report(command, resolved, outcome.result).dump(2) << '\n';
    } else if (format == "csv") {
        write_csv(sink, make_table(command, resolved, outcome.result));
    } else if (command == "bessel") {
        write_bessel_table(sink, outcome.result);
    } else {
        write_text_table(sink, make_table(command, resolved, outcome.result));
    }
    sink.flush();
    if (!sink) {
        err << "output: write failed\n";
        return kExitNumerical;
    }
    return outcome.status;
}

}  // namespace chaoslab::cli
