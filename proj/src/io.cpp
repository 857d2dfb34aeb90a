#include "chaoslab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "chaoslab/errors.hpp"

namespace chaoslab::io {
namespace {

std::vector<std::string> label_list(const Json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw FieldError(where, "expected a nonempty array of labels");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& e : v) {
        if (!e.is_string()) throw FieldError(where, "labels must be strings");
        if (!seen.insert(e.get<std::string>()).second) throw FieldError(where, "duplicate label '" + e.get<std::string>() + "'");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::size_t label_position(const std::vector<std::string>& T, const std::string& label, const std::string& where) {
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (T[i] == label) return i;
    }
    throw FieldError(where, "unknown label '" + label + "'");
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& at) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw FieldError(join(at, key), "unknown parameter");
    }
}

/// Vector over T from {label: value}; missing labels are 0. A bare number is
/// accepted when |T| = 1.
std::vector<double> vector_over_T(const Json& v, const std::vector<std::string>& T, const std::string& where) {
    std::vector<double> out(T.size(), 0.0);
    if (v.is_number() && T.size() == 1) {
        out[0] = as_number(v, where);
        return out;
    }
    if (!v.is_object()) throw FieldError(where, "expected an object mapping T labels to numbers");
    for (const auto& [label, value] : v.items()) {
        out[label_position(T, label, where)] = as_number(value, join(where, label));
    }
    return out;
}

Json vector_to_json(const std::vector<double>& v, const std::vector<std::string>& T) {
    Json out = Json::object();
    for (std::size_t i = 0; i < T.size(); ++i) out[T[i]] = number(v[i]);
    return out;
}

template <class F>
auto rethrow_domain(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const FieldError&) {
        throw;
    } catch (const Error& e) {
        throw FieldError(where, e.what());
    }
}

}  // namespace

std::string join(const std::string& at, const std::string& key) { return at.empty() ? key : at + "." + key; }

const Json& need(const Json& j, const std::string& key, const std::string& at) {
    if (!j.is_object()) throw FieldError(at.empty() ? key : at, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw FieldError(join(at, key), "required");
    return *it;
}

double as_number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw FieldError(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FieldError(where, "must be finite");
    return d;
}

double get_number(const Json& j, const std::string& key, const std::string& at) {
    return as_number(need(j, key, at), join(at, key));
}

double get_number_or(const Json& j, const std::string& key, const std::string& at, double fallback) {
    if (!j.contains(key)) return fallback;
    return as_number(j.at(key), join(at, key));
}

long long get_integer(const Json& j, const std::string& key, const std::string& at) {
    const Json& v = need(j, key, at);
    if (!v.is_number_integer()) throw FieldError(join(at, key), "expected an integer");
    return v.get<long long>();
}

std::vector<double> number_list(const Json& v, const std::string& where) {
    if (!v.is_array()) throw FieldError(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into line and column.
        const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string msg = e.what();
        if (const auto pos = msg.find(": ", msg.find("parse error")); pos != std::string::npos) msg = msg.substr(pos + 2);
        throw ParseError(msg, line, column);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

Json number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// --- distributions -----------------------------------------------------------------------

std::string canonical_family(const std::string& name) {
    static const std::set<std::string> names{"gaussian", "rademacher", "poisson", "gamma",
                                             "exponential", "symmetric_stable", "inverse_gaussian", "symmetric_nig",
                                             "point_mass", "uniform", "pareto"};
    if (names.count(name)) return name;
    if (name == "ig") return "inverse_gaussian";
    if (name == "nig") return "symmetric_nig";
    if (name == "stable") return "symmetric_stable";
    if (name == "normal") return "gaussian";
    return "";
}

DistributionSpec distribution_from_json(const Json& j, const std::string& at) {
    const Json& fam = need(j, "family", at);
    const std::string fam_at = join(at, "family");
    if (!fam.is_string()) throw FieldError(fam_at, "expected a string");
    const std::string name = canonical_family(fam.get<std::string>());
    if (name.empty()) throw FieldError(fam_at, "unknown '" + fam.get<std::string>() + "'");
    const std::string p_at = join(at, "params");
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    if (!params.is_object()) throw FieldError(p_at, "expected an object");
    auto num = [&](const char* key) { return get_number(params, key, p_at); };
    auto num_or = [&](const char* key, double d) { return get_number_or(params, key, p_at, d); };
    auto family = [&]() -> Family {
        if (name == "gaussian") {
            check_keys(params, {"mean", "variance"}, p_at);
            return Gaussian{num_or("mean", 0.0), num_or("variance", 1.0)};
        }
        if (name == "rademacher") {
            check_keys(params, {}, p_at);
            return Rademacher{};
        }
        if (name == "poisson") {
            check_keys(params, {"rate"}, p_at);
            return Poisson{num("rate")};
        }
        if (name == "gamma") {
            check_keys(params, {"shape", "rate"}, p_at);
            return GammaLaw{num("shape"), num("rate")};
        }
        if (name == "exponential") {
            check_keys(params, {"rate"}, p_at);
            return Exponential{num("rate")};
        }
        if (name == "symmetric_stable") {
            check_keys(params, {"alpha", "scale"}, p_at);
            return SymmetricStable{num("alpha"), num_or("scale", 1.0)};
        }
        if (name == "inverse_gaussian") {
            check_keys(params, {"mu", "lambda"}, p_at);
            return InverseGaussian{num("mu"), num("lambda")};
        }
        if (name == "symmetric_nig") {
            check_keys(params, {"alpha", "delta"}, p_at);
            return SymmetricNIG{num("alpha"), num("delta")};
        }
        if (name == "point_mass") {
            check_keys(params, {"value"}, p_at);
            return PointMass{num("value")};
        }
        if (name == "uniform") {
            check_keys(params, {"a", "b"}, p_at);
            return Uniform{num("a"), num("b")};
        }
        check_keys(params, {"alpha", "scale"}, p_at);
        return Pareto{num("alpha"), num_or("scale", 1.0)};
    };
    return rethrow_domain(p_at, [&] { return DistributionSpec(family()); });
}

Json to_json(const DistributionSpec& spec) {
    Json params = Json::object();
    std::visit(
        [&params](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Gaussian>) {
                params["mean"] = f.mean;
                params["variance"] = f.variance;
            } else if constexpr (std::is_same_v<F, Poisson> || std::is_same_v<F, Exponential>) {
                params["rate"] = f.rate;
            } else if constexpr (std::is_same_v<F, GammaLaw>) {
                params["shape"] = f.shape;
                params["rate"] = f.rate;
            } else if constexpr (std::is_same_v<F, SymmetricStable> || std::is_same_v<F, Pareto>) {
                params["alpha"] = f.alpha;
                params["scale"] = f.scale;
            } else if constexpr (std::is_same_v<F, InverseGaussian>) {
                params["mu"] = f.mu;
                params["lambda"] = f.lambda;
            } else if constexpr (std::is_same_v<F, SymmetricNIG>) {
                params["alpha"] = f.alpha;
                params["delta"] = f.delta;
            } else if constexpr (std::is_same_v<F, PointMass>) {
                params["value"] = f.value;
            } else if constexpr (std::is_same_v<F, Uniform>) {
                params["a"] = f.a;
                params["b"] = f.b;
            }
        },
        spec.family());
    return Json{{"family", std::string(spec.name())}, {"params", params}};
}

// --- chaos processes ----------------------------------------------------------------------

ChaosProcessSpec process_from_json(const Json& j, const std::string& at) {
    const auto T = label_list(need(j, "T", at), join(at, "T"));
    const long long d = get_integer(j, "d", at);
    const long long l = get_integer(j, "l", at);
    if (d < 1) throw FieldError(join(at, "d"), "must be >= 1");
    if (l < 1) throw FieldError(join(at, "l"), "must be >= 1");
    const DistributionSpec driver = distribution_from_json(need(j, "driver", at), join(at, "driver"));
    TetrahedralPolynomial poly(static_cast<std::size_t>(d), static_cast<std::size_t>(l), T.size());
    if (j.contains("x0")) poly.set_constant(vector_over_T(j.at("x0"), T, join(at, "x0")));
    if (j.contains("coeffs")) {
        const Json& cs = j.at("coeffs");
        if (!cs.is_array()) throw FieldError(join(at, "coeffs"), "expected an array");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string c_at = join(at, "coeffs[" + std::to_string(i) + "]");
            const Json& idx = need(cs[i], "idx", c_at);
            if (!idx.is_array()) throw FieldError(join(c_at, "idx"), "expected an array of indices");
            MultiIndex key;
            for (const auto& e : idx) {
                if (!e.is_number_integer() || e.get<long long>() < 1) {
                    throw FieldError(join(c_at, "idx"), "indices must be integers >= 1");
                }
                key.push_back(e.get<std::size_t>());
            }
            auto value = vector_over_T(need(cs[i], "value", c_at), T, join(c_at, "value"));
            rethrow_domain(c_at, [&] {
                poly.set(std::move(key), std::move(value));
                return 0;
            });
        }
    }
    std::vector<double> scales;
    if (j.contains("driver_scales")) scales = number_list(j.at("driver_scales"), join(at, "driver_scales"));
    ChaosProcessSpec spec{T, std::move(poly), Driver{driver, std::move(scales)}};
    rethrow_domain(at, [&] {
        spec.validate();
        return 0;
    });
    return spec;
}

Json to_json(const ChaosProcessSpec& spec) {
    Json coeffs = Json::array();
    for (const auto& [key, value] : spec.poly.coefficients()) {
        coeffs.push_back(Json{{"idx", key}, {"value", vector_to_json(value, spec.T)}});
    }
    Json out{{"T", spec.T},
             {"d", spec.poly.order()},
             {"l", spec.poly.variables()},
             {"x0", vector_to_json(spec.poly.constant(), spec.T)},
             {"coeffs", coeffs},
             {"driver", to_json(spec.driver.base)}};
    if (!spec.driver.scales.empty()) out["driver_scales"] = spec.driver.scales;
    return out;
}

// --- seminorms --------------------------------------------------------------------------------

PseudoSeminormSpec seminorm_from_json(const Json& j, const std::vector<std::string>& T, const std::string& at) {
    const Json& kind_j = need(j, "kind", at);
    if (!kind_j.is_string()) throw FieldError(join(at, "kind"), "expected a string");
    const std::string kind = kind_j.get<std::string>();
    return rethrow_domain(at, [&]() -> PseudoSeminormSpec {
        if (kind == "sup") return PseudoSeminormSpec::sup(T.size());
        if (kind == "p_variation") {
            const double p = get_number(j, "p", at);
            if (!j.contains("levels") || (j.at("levels").is_string() && j.at("levels").get<std::string>() == "dyadic")) {
                return PseudoSeminormSpec::dyadic_p_variation(T.size(), p);
            }
            const Json& levels = j.at("levels");
            if (!levels.is_array()) throw FieldError(join(at, "levels"), "expected \"dyadic\" or an array of label lists");
            std::vector<std::vector<std::size_t>> out;
            for (std::size_t n = 0; n < levels.size(); ++n) {
                const std::string l_at = join(at, "levels[" + std::to_string(n) + "]");
                if (!levels[n].is_array()) throw FieldError(l_at, "expected an array of labels");
                std::vector<std::size_t> level;
                for (const auto& e : levels[n]) {
                    if (!e.is_string()) throw FieldError(l_at, "labels must be strings");
                    level.push_back(label_position(T, e.get<std::string>(), l_at));
                }
                out.push_back(std::move(level));
            }
            return PseudoSeminormSpec::p_variation(T.size(), p, std::move(out));
        }
        if (kind == "functional_sup") {
            const Json& fs = need(j, "functionals", at);
            if (!fs.is_array()) throw FieldError(join(at, "functionals"), "expected an array");
            std::vector<LinearFunctional> out;
            for (std::size_t n = 0; n < fs.size(); ++n) {
                const std::string f_at = join(at, "functionals[" + std::to_string(n) + "]");
                if (!fs[n].is_object()) throw FieldError(f_at, "expected an object mapping labels to weights");
                LinearFunctional f;
                for (const auto& [label, w] : fs[n].items()) {
                    f.weights.emplace_back(label_position(T, label, f_at), as_number(w, join(f_at, label)));
                }
                out.push_back(std::move(f));
            }
            return PseudoSeminormSpec::functional_sup(T.size(), std::move(out));
        }
        throw FieldError(join(at, "kind"), "unknown '" + kind + "'");
    });
}

Json seminorm_to_json(const PseudoSeminormSpec& spec, const std::vector<std::string>& T) {
    return std::visit(
        [&T](const auto& s) -> Json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, SupNorm>) {
                return Json{{"kind", "sup"}};
            } else if constexpr (std::is_same_v<S, PVariation>) {
                Json levels = Json::array();
                for (const auto& level : s.levels) {
                    Json l = Json::array();
                    for (std::size_t pos : level) l.push_back(T[pos]);
                    levels.push_back(l);
                }
                return Json{{"kind", "p_variation"}, {"p", s.p}, {"levels", levels}};
            } else {
                Json fs = Json::array();
                for (const auto& f : s.functionals) {
                    Json o = Json::object();
                    for (const auto& [pos, w] : f.weights) o[T[pos]] = w;
                    fs.push_back(o);
                }
                return Json{{"kind", "functional_sup"}, {"functionals", fs}};
            }
        },
        spec.variant());
}

// --- integral processes -------------------------------------------------------------------------

IntegralProcessGrid integral_grid_from_json(const Json& j, const std::string& at) {
    const auto T = label_list(need(j, "T", at), join(at, "T"));
    auto grid = number_list(need(j, "grid", at), join(at, "grid"));
    const DistributionSpec family = distribution_from_json(need(j, "family", at), join(at, "family"));
    const Json& kernel = need(j, "kernel", at);
    const std::string k_at = join(at, "kernel");
    return rethrow_domain(at, [&]() -> IntegralProcessGrid {
        if (kernel.is_object()) {
            const Json& kind = need(kernel, "kind", k_at);
            if (kind != "indicator") throw FieldError(join(k_at, "kind"), "unknown kernel kind");
            const auto t_values = number_list(need(kernel, "t", k_at), join(k_at, "t"));
            return make_integral_grid(T, t_values, grid, [](double t, double s) { return s < t ? 1.0 : 0.0; },
                                      family);
        }
        if (!kernel.is_array()) throw FieldError(k_at, "expected a matrix or {\"kind\": \"indicator\"}");
        IntegralProcessGrid out{T, grid, {}, family};
        for (std::size_t i = 0; i < kernel.size(); ++i) {
            out.kernel.push_back(number_list(kernel[i], k_at + "[" + std::to_string(i) + "]"));
        }
        out.validate();
        return out;
    });
}

// --- curves --------------------------------------------------------------------------------------

PolynomialCurve curve_from_json(const Json& j, const std::string& at) {
    PolynomialCurve c;
    const long long d = get_integer(j, "d", at);
    if (d < 1) throw FieldError(join(at, "d"), "must be >= 1");
    c.d = static_cast<int>(d);
    c.epsilon = get_number(j, "epsilon", at);
    const Json& cs = need(j, "coeffs", at);
    if (!cs.is_array()) throw FieldError(join(at, "coeffs"), "expected an array");
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const std::string c_at = join(at, "coeffs[" + std::to_string(k) + "]");
        if (cs[k].is_number()) {
            c.coeffs.push_back({as_number(cs[k], c_at)});
        } else {
            c.coeffs.push_back(number_list(cs[k], c_at));
        }
    }
    rethrow_domain(at, [&] {
        c.validate();
        return 0;
    });
    return c;
}

Json to_json(const PolynomialCurve& curve) {
    Json cs = Json::array();
    for (const auto& v : curve.coeffs) cs.push_back(v);
    return Json{{"d", curve.d}, {"epsilon", curve.epsilon}, {"coeffs", cs}};
}

// --- Levy models ------------------------------------------------------------------------------------

LevyModel levy_from_json(const Json& j, const std::string& at) {
    if (!j.is_object()) throw FieldError(at, "expected an object");
    LevyModel m;
    m.gaussian_variance = get_number_or(j, "gaussian_variance", at, 0.0);
    m.drift = get_number_or(j, "drift", at, 0.0);
    if (j.contains("jumps")) {
        const Json& jumps = j.at("jumps");
        const std::string j_at = join(at, "jumps");
        const Json& kind_j = need(jumps, "kind", j_at);
        const std::string kind = kind_j.is_string() ? kind_j.get<std::string>() : "";
        if (kind == "none") {
            m.jumps = NoJumps{};
        } else if (kind == "atomic") {
            const Json& atoms = need(jumps, "atoms", j_at);
            if (!atoms.is_array()) throw FieldError(join(j_at, "atoms"), "expected an array");
            AtomicJumps a;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                const std::string a_at = join(j_at, "atoms[" + std::to_string(i) + "]");
                a.atoms.push_back({get_number(atoms[i], "size", a_at), get_number(atoms[i], "rate", a_at)});
            }
            m.jumps = std::move(a);
        } else if (kind == "truncated_power_law") {
            m.jumps = TruncatedPowerLaw{get_number(jumps, "c", j_at), get_number(jumps, "alpha", j_at),
                                        get_number(jumps, "cutoff", j_at)};
        } else {
            throw FieldError(join(j_at, "kind"), "unknown '" + kind + "'");
        }
    }
    rethrow_domain(at, [&] {
        m.validate();
        return 0;
    });
    return m;
}

Json to_json(const LevyModel& model) {
    Json jumps = std::visit(
        [](const auto& part) -> Json {
            using P = std::decay_t<decltype(part)>;
            if constexpr (std::is_same_v<P, NoJumps>) {
                return Json{{"kind", "none"}};
            } else if constexpr (std::is_same_v<P, AtomicJumps>) {
                Json atoms = Json::array();
                for (const auto& a : part.atoms) atoms.push_back(Json{{"size", a.size}, {"rate", a.rate}});
                return Json{{"kind", "atomic"}, {"atoms", atoms}};
            } else if constexpr (std::is_same_v<P, TruncatedPowerLaw>) {
                return Json{{"kind", "truncated_power_law"}, {"c", part.c}, {"alpha", part.alpha}, {"cutoff", part.cutoff}};
            } else {
                return Json{{"kind", part.label}};
            }
        },
        model.jumps);
    return Json{{"gaussian_variance", model.gaussian_variance}, {"drift", model.drift}, {"jumps", jumps}};
}

// --- reports ---------------------------------------------------------------------------------------

Json to_json(const CqReport& report, bool with_curves) {
    Json scales = Json::array();
    for (const auto& r : report.scales) {
        Json s{{"m", number(r.m)},         {"law", r.law},      {"c_z", number(r.c_z)},
               {"beta1", number(r.beta1)}, {"beta2", number(r.beta2)}, {"beta2_stderr", number(r.beta2_stderr)}};
        if (with_curves) {
            Json curve = Json::array();
            for (const auto& p : r.curve) {
                curve.push_back(Json{{"s", number(p.s)},
                                     {"ratio", number(p.ratio)},
                                     {"stderr", number(p.stderr_)},
                                     {"tail", number(p.tail)},
                                     {"truncated_moment", number(p.truncated_moment)}});
            }
            s["ratio_curve"] = curve;
        }
        scales.push_back(s);
    }
    return Json{{"q", number(report.q)},
                {"family", report.family},
                {"verdict", std::string(to_string(report.verdict))},
                {"beta1_min", number(report.beta1_min)},
                {"beta2_max", number(report.beta2_max)},
                {"diagnostics", report.diagnostics},
                {"scales", scales}};
}

Json to_json(const CinfReport& report) {
    Json entries = Json::array();
    for (const auto& e : report.entries) {
        entries.push_back(Json{{"law", e.law}, {"ess_sup", number(e.ess_sup)}, {"sd", number(e.sd)}, {"ratio", number(e.ratio)}});
    }
    return Json{{"beta3", number(report.beta3)},
                {"verdict", std::string(to_string(report.verdict))},
                {"diagnostics", report.diagnostics},
                {"entries", entries}};
}

Json to_json(const EquivalenceReport& r) {
    Json out{{"p", number(r.p)},
             {"r", number(r.r)},
             {"d", r.d},
             {"regime", std::string(to_string(r.regime))},
             {"beta3", r.beta3 ? number(*r.beta3) : Json(nullptr)},
             {"k", r.k ? number(*r.k) : Json("UNSPECIFIED_CONSTANT")},
             {"norm_p", Json{{"estimate", number(r.norm_p.estimate)}, {"stderr", number(r.norm_p.stderr_)}}},
             {"norm_r", Json{{"estimate", number(r.norm_r.estimate)}, {"stderr", number(r.norm_r.stderr_)}}},
             {"ratio", number(r.ratio)},
             {"ratio_stderr", number(r.ratio_stderr)},
             {"margin", r.margin ? number(*r.margin) : Json(nullptr)},
             {"pass", r.pass},
             {"n_paths", r.n_paths},
             {"notes", r.notes}};
    return out;
}

Json to_json(const GenargCheck& c) {
    return Json{{"lhs", number(c.lhs)}, {"rhs", number(c.rhs)}, {"M", number(c.M)}, {"margin", number(c.margin)}, {"pass", c.pass}};
}

Json to_json(const CorpusResult& corpus, bool with_rows) {
    double tightest = 0.0;
    for (const auto& row : corpus.rows) {
        if (row.genarg.rhs > 0.0) tightest = std::max(tightest, row.genarg.lhs / row.genarg.rhs);
    }
    Json out{{"n", corpus.rows.size()},
             {"genarg_pass", corpus.genarg_pass},
             {"leading_coeff_pass", corpus.leading_pass},
             {"max_lhs_over_rhs", number(tightest)}};
    if (with_rows) {
        Json rows = Json::array();
        for (const auto& row : corpus.rows) {
            rows.push_back(Json{{"index", row.index},
                                {"d", row.d},
                                {"epsilon", number(row.epsilon)},
                                {"seminorm", row.seminorm},
                                {"genarg", to_json(row.genarg)},
                                {"leading_coeff", to_json(row.leading)}});
        }
        out["rows"] = rows;
    }
    return out;
}

Json to_json(const TailIndexResult& r) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < r.s.size(); ++i) pts.push_back(Json{{"s", number(r.s[i])}, {"tail", number(r.tail[i])}});
    return Json{{"slope", number(r.slope)},
                {"intercept", number(r.intercept)},
                {"curvature", number(r.curvature)},
                {"flag", r.regularly_varying ? "REGULARLY_VARYING" : "NOT_REGULARLY_VARYING"},
                {"points", pts}};
}

Json to_json(const L1Result& r) {
    return Json{{"value", number(r.value)},
                {"kind", r.is_bound ? "BOUND" : "VALUE"},
                {"tail", number(r.tail)},
                {"upper_limit", number(r.upper_limit)},
                {"warnings", r.warnings}};
}

Json to_json(const MomentRatioRow& row) {
    return Json{{"t", number(row.t)},
                {"l1", number(row.l1)},
                {"l2", number(row.l2)},
                {"ratio", number(row.ratio)},
                {"l1_kind", row.l1_is_bound ? "BOUND" : "VALUE"}};
}

Json to_json(const TruncationRow& row) {
    return Json{{"prefix", row.prefix}, {"distance", number(row.distance)}, {"stderr", number(row.stderr_)}};
}

// --- CSV ------------------------------------------------------------------------------------------

std::string CsvWriter::quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << quote(fields[i]);
    }
    out_ << "\r\n";
}

}  // namespace chaoslab::io
