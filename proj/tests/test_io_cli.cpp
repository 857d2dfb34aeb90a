#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "chaoslab/cli.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/io.hpp"

using namespace chaoslab;
using io::Json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("chaoslab_test_" + name);
    std::ofstream(path, std::ios::binary) << text;
    return path.string();
}

const char* kProduct = R"({"T":["t"],"d":2,"l":2,"coeffs":[{"idx":[1,2],"value":1}],"driver":{"family":"gaussian"}})";

}  // namespace

TEST_CASE("CSV quoting") {
    CHECK(io::CsvWriter::quote("plain") == "plain");
    CHECK(io::CsvWriter::quote("a,b") == "\"a,b\"");
    CHECK(io::CsvWriter::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(io::CsvWriter::quote("two\nlines") == "\"two\nlines\"");
    CHECK(io::CsvWriter::quote("cr\r") == "\"cr\r\"");
    CHECK(io::CsvWriter::quote("") == "");
    std::ostringstream s;
    io::CsvWriter w(s);
    w.row({"x", "y,z"});
    w.row({"1", "2"});
    CHECK(s.str() == "x,\"y,z\"\r\n1,2\r\n");
}

TEST_CASE("number formatting round trips") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> e(-300.0, 300.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::pow(10.0, e(rng)) * (i % 2 ? -1.0 : 1.0);
        CHECK(std::stod(io::format_number(v)) == v);
    }
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(INFINITY) == "inf");
    CHECK(io::format_number(-INFINITY) == "-inf");
    CHECK(io::format_number(NAN) == "nan");
    CHECK(io::number(INFINITY) == "inf");
    CHECK(io::number(NAN).is_null());
}

TEST_CASE("parse errors carry line and column") {
    try {
        io::parse_json("{\n  \"a\": 1,\n  \"b\": ]\n}");
        FAIL("no exception");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 8);
    }
}

TEST_CASE("distribution configs") {
    CHECK(io::distribution_from_json(Json::parse(R"({"family":"ig","params":{"mu":2,"lambda":3}})")) ==
          DistributionSpec{InverseGaussian{2.0, 3.0}});
    CHECK(io::distribution_from_json(Json::parse(R"({"family":"normal"})")) == DistributionSpec{Gaussian{}});
    auto message = [](const char* text) {
        try {
            io::distribution_from_json(Json::parse(text));
        } catch (const io::FieldError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"family":"gauss"})") == "family: unknown 'gauss'");
    CHECK(message(R"({"family":"ig","params":{"mu":1}})") == "params.lambda: required");
    CHECK(message(R"({"family":"ig","params":{"mu":1,"lambda":1,"nu":2}})") == "params.nu: unknown parameter");
    CHECK(message(R"({"family":"ig","params":{"mu":-1,"lambda":1}})").rfind("params: ", 0) == 0);
    CHECK(message(R"({"family":"ig","params":{"mu":"1","lambda":1}})") == "params.mu: expected a number");
    for (const DistributionSpec& d : {DistributionSpec{SymmetricNIG{1.0, 2.0}}, DistributionSpec{Pareto{1.5, 3.0}},
                                      DistributionSpec{Rademacher{}}, DistributionSpec{Uniform{-1.0, 2.0}}}) {
        CHECK(io::distribution_from_json(io::to_json(d)) == d);
    }
}

TEST_CASE("process, seminorm, curve and model round trips") {
    const auto p = io::process_from_json(Json::parse(R"({"T":["a","b"],"d":2,"l":3,"x0":{"a":1},
        "coeffs":[{"idx":[1,3],"value":{"b":2}},{"idx":[2],"value":{"a":-1,"b":0.5}}],
        "driver":{"family":"nig","params":{"alpha":1,"delta":1}},"driver_scales":[1,0.5,0.25]})"));
    CHECK(p.poly.coefficients().size() == 2);
    CHECK(p.poly.constant() == std::vector<double>{1.0, 0.0});
    CHECK(io::to_json(io::process_from_json(io::to_json(p))) == io::to_json(p));
    CHECK_THROWS_AS(io::process_from_json(Json::parse(R"({"T":["a"],"d":1,"l":1,"coeffs":[{"idx":[2],"value":1}],
        "driver":{"family":"gaussian"}})")), io::FieldError);

    const std::vector<std::string> T{"a", "b", "c"};
    const auto s = io::seminorm_from_json(Json::parse(R"({"kind":"p_variation","p":2,"levels":[["a","c"],["a","b","c"]]})"), T);
    CHECK(eval_seminorm(s, {0.0, 3.0, 0.0}) == doctest::Approx(std::sqrt(18.0)));
    CHECK(io::seminorm_to_json(io::seminorm_from_json(io::seminorm_to_json(s, T), T), T) == io::seminorm_to_json(s, T));
    CHECK_THROWS_AS(io::seminorm_from_json(Json::parse(R"({"kind":"sup2"})"), T), io::FieldError);
    CHECK_THROWS_AS(io::seminorm_from_json(Json::parse(R"({"kind":"functional_sup","functionals":[{"z":1}]})"), T),
                    io::FieldError);

    const auto c = io::curve_from_json(Json::parse(R"({"d":2,"epsilon":0.5,"coeffs":[1,[2],3]})"));
    CHECK(c.coeffs.size() == 3);
    CHECK(io::to_json(io::curve_from_json(io::to_json(c))) == io::to_json(c));

    const auto m = io::levy_from_json(Json::parse(R"({"jumps":{"kind":"atomic","atoms":[{"size":1,"rate":0.5},{"size":-1,"rate":0.5}]}})"));
    CHECK(m.symmetric());
    CHECK(io::to_json(io::levy_from_json(io::to_json(m))) == io::to_json(m));
    CHECK_THROWS_AS(io::levy_from_json(Json::parse(R"({"jumps":{"kind":"truncated_power_law","c":1,"alpha":3,"cutoff":1}})")),
                    io::FieldError);
}

TEST_CASE("validate_config") {
    CHECK(cli::validate_config(write_temp("ok.json", R"({"command":"check-cq","seed":1,"family":"gaussian","q":2})")).empty());
    CHECK(cli::validate_config(write_temp("bessel.json", R"({"command":"bessel","z":[1]})")).empty());
    CHECK(cli::validate_config(write_temp("noseed.json", R"({"command":"check-cq","family":"gaussian","q":2})")) ==
          std::vector<std::string>{"seed: required"});
    CHECK(cli::validate_config(write_temp("gauss.json", R"({"command":"check-cq","seed":1,"family":"gauss","q":2})")) ==
          std::vector<std::string>{"family: unknown 'gauss'"});
    CHECK(cli::validate_config(write_temp("nocmd.json", R"({"seed":1,"family":"gaussian","q":2})"), "check-cq").empty());
    CHECK(cli::validate_config(write_temp("extra.json", R"({"command":"genarg","seed":1,"bogus":2})")) ==
          std::vector<std::string>{"bogus: unknown field"});
    CHECK_THROWS_AS(cli::validate_config(write_temp("broken.json", "{\"seed\": 1,,}")), ParseError);
}

TEST_CASE("cli: documented examples") {
    const auto b = run({"bessel", "--z", "1"});
    CHECK(b.code == 0);
    CHECK(b.out == "0.6019072302\n");

    const auto cq = run({"check-cq", "--family", "ig", "--mu", "1", "--lambda", "1", "--q", "0.4", "--scales",
                         "1,0.1,0.01,0.001", "--seed", "42"});
    CHECK(cq.code == 0);
    const auto report = Json::parse(cq.out);
    CHECK(report["schema_version"] == 1);
    CHECK(report["result"]["verdict"] == "PASS");
    CHECK(report["config"]["family"] == "inverse_gaussian");

    const auto ga = run({"genarg", "--corpus", "random", "--n", "100", "--dmax", "4", "--seed", "7"});
    CHECK(ga.code == 0);
    CHECK(Json::parse(ga.out)["result"]["genarg_pass"] == 100);
}

TEST_CASE("cli: exit codes") {
    CHECK(run({"check-cq", "--family", "gaussian", "--q", "2"}).code == cli::kExitUsage);
    CHECK(run({"check-cq", "--family", "gaussian", "--q", "2"}).err == "seed: required\n");
    CHECK(run({"check-cq", "--family", "gauss", "--q", "2", "--seed", "1"}).err == "family: unknown 'gauss'\n");
    CHECK(run({"no-such-command"}).code == cli::kExitUsage);
    CHECK(run({"check-cq", "--family", "ig", "--mu", "1", "--lambda", "1", "--q", "1", "--scales", "1,0.1,0.01,0.001",
               "--seed", "1"})
              .code == cli::kExitFail);
    const auto num = run({"tail-index", "--family", "gaussian", "--s-grid", "1,10,100,1000", "--seed", "1"});
    CHECK(num.code == cli::kExitNumerical);
    CHECK(num.out.empty());
    CHECK(run({"check-cq", "--family", "gaussian", "--q", "2", "--seed", "1", "--output", "/no/such/dir/r.json"}).code ==
          cli::kExitUsage);
}

TEST_CASE("cli: dry run resolves without computing") {
    const auto d = run({"genarg", "--n", "1000000000", "--seed", "1", "--dry-run"});
    CHECK(d.code == 0);
    const auto plan = Json::parse(d.out);
    CHECK(plan["dry_run"] == true);
    CHECK(plan["config"]["n"] == 1000000000);
    CHECK_FALSE(plan.contains("result"));
    const auto eq = run({"equivalence", "--process", kProduct, "--seed", "1", "--dry-run"});
    CHECK(eq.code == 0);
    CHECK(Json::parse(eq.out)["config"]["process"]["driver"]["family"] == "gaussian");
}

TEST_CASE("cli: reports are byte identical across runs and worker counts") {
    const std::vector<std::string> eq{"equivalence", "--process", kProduct, "--n-paths", "20000", "--resamples", "20", "--seed", "5"};
    const auto a = run(eq);
    auto threaded = eq;
    threaded.push_back("--threads");
    threaded.push_back("3");
    const auto b = run(threaded);
    set_worker_count(1);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const std::vector<std::string> sim{"simulate", "--process", kProduct, "--n-paths", "5", "--seed", "5"};
    CHECK(run(sim).out == run(sim).out);
    auto other = sim;
    other.back() = "6";
    CHECK(run(sim).out != run(other).out);
}

TEST_CASE("cli: config files, overrides and formats") {
    const auto cfg = write_temp("levy.json", R"({"command":"levy-ratio","seed":3,"model":"unit_jump","t_grid":[0.1,0.01]})");
    const auto csv = run({"levy-ratio", "--config", cfg, "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("t,l1,l2,ratio\r\n0.1,", 0) == 0);
    const auto over = run({"levy-ratio", "--config", cfg, "--t-grid", "0.5"});
    CHECK(Json::parse(over.out)["config"]["t_grid"] == Json::array({0.5}));
    CHECK(run({"check-cq", "--config", cfg}).code == cli::kExitUsage);

    const auto path = (std::filesystem::temp_directory_path() / "chaoslab_test_out.json").string();
    std::filesystem::remove(path);
    CHECK(run({"bessel", "--z", "1,2", "--format", "json", "--output", path}).out.empty());
    std::ifstream in(path);
    const auto j = Json::parse(in);
    CHECK(j["result"]["values"].size() == 2);

    const auto table = run({"check-cinf", "--family", "uniform", "--a", "0", "--b", "1", "--seed", "1", "--format", "table"});
    CHECK(table.code == 0);
    CHECK(table.out.find("verdict: PASS") != std::string::npos);
}

TEST_CASE("check-cq default scales reach small m") {
    const auto nig = run({"check-cq", "--family", "symmetric_nig", "--alpha", "1", "--delta", "1", "--q", "1",
                          "--seed", "3"});
    CHECK(nig.code == 1);
    CHECK(Json::parse(nig.out)["result"]["verdict"] == "FAIL_DIVERGENT");
    CHECK(Json::parse(nig.out)["config"]["scales"].size() == 6);

    const auto rad = run({"check-cq", "--family", "rademacher", "--q", "2", "--seed", "3"});
    CHECK(rad.code == 0);
    CHECK(Json::parse(rad.out)["config"]["scales"].size() == 1);

    // the median of Gamma(1e-4) lies below the representable range
    const auto gam = run({"check-cq", "--family", "gamma", "--shape", "1", "--rate", "1", "--q", "1", "--seed", "3"});
    CHECK(gam.code == 1);
    CHECK(Json::parse(gam.out)["result"]["diagnostics"].get<std::string>().find("dropped") != std::string::npos);

    const auto tiny = run({"check-cq", "--family", "gamma", "--shape", "1", "--rate", "1", "--q", "1", "--scales",
                           "1e-4", "--seed", "3"});
    CHECK(tiny.code == 3);
}
