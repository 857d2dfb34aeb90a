#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chaoslab/chaos.hpp"
#include "chaoslab/cq_checker.hpp"
#include "chaoslab/distributions.hpp"
#include "chaoslab/equivalence.hpp"
#include "chaoslab/levy.hpp"
#include "chaoslab/polybound.hpp"
#include "chaoslab/seminorms.hpp"

namespace chaoslab::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// A configuration value that cannot be used; `field` is a dotted path.
class FieldError : public std::runtime_error {
public:
    FieldError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Parses JSON text; ParseError carries the 1-based line and column.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

/// Finite numbers as numbers, infinities as "inf" / "-inf", NaN as null.
Json number(double v);

// Field access ----------------------------------------------------------------------
// All throw FieldError naming the dotted path of the offending value.

std::string join(const std::string& at, const std::string& key);
const Json& need(const Json& j, const std::string& key, const std::string& at);
double as_number(const Json& v, const std::string& where);
double get_number(const Json& j, const std::string& key, const std::string& at);
double get_number_or(const Json& j, const std::string& key, const std::string& at, double fallback);
long long get_integer(const Json& j, const std::string& key, const std::string& at);
std::vector<double> number_list(const Json& v, const std::string& where);

// Inputs --------------------------------------------------------------------------

/// Canonical family name for a name or alias ("ig", "nig", "stable", "normal").
/// Empty when unknown.
std::string canonical_family(const std::string& name);

/// {"family": name, "params": {...}}; errors are reported under `at`.
DistributionSpec distribution_from_json(const Json& j, const std::string& at = "");
Json to_json(const DistributionSpec& spec);

ChaosProcessSpec process_from_json(const Json& j, const std::string& at = "process");
Json to_json(const ChaosProcessSpec& spec);

/// Seminorms name indices by T labels.
PseudoSeminormSpec seminorm_from_json(const Json& j, const std::vector<std::string>& T,
                                      const std::string& at = "seminorm");
Json seminorm_to_json(const PseudoSeminormSpec& spec, const std::vector<std::string>& T);

IntegralProcessGrid integral_grid_from_json(const Json& j, const std::string& at = "integral_process");

PolynomialCurve curve_from_json(const Json& j, const std::string& at = "curve");
Json to_json(const PolynomialCurve& curve);

LevyModel levy_from_json(const Json& j, const std::string& at = "model");
Json to_json(const LevyModel& model);

// Reports -------------------------------------------------------------------------

Json to_json(const CqReport& report, bool with_curves = true);
Json to_json(const CinfReport& report);
Json to_json(const EquivalenceReport& report);
Json to_json(const GenargCheck& check);
Json to_json(const CorpusResult& corpus, bool with_rows = false);
Json to_json(const TailIndexResult& result);
Json to_json(const L1Result& result);
Json to_json(const MomentRatioRow& row);
Json to_json(const TruncationRow& row);

// CSV -------------------------------------------------------------------------------

/// RFC 4180 records: CRLF line ends, fields quoted when they hold a comma,
/// quote, CR or LF, embedded quotes doubled.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void row(const std::vector<std::string>& fields);

    static std::string quote(const std::string& field);

private:
    std::ostream& out_;
};

/// Shortest round-trip decimal form ("inf", "-inf", "nan" for non-finite).
std::string format_number(double v);

}  // namespace chaoslab::io
