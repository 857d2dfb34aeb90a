#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "chaoslab/io.hpp"

namespace chaoslab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one subcommand. args excludes the program name. The report goes to
/// `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Field errors of a config file; empty when the config is usable. The
/// subcommand comes from `command` or else from the file's "command" field.
/// ParseError when the file is not JSON.
std::vector<std::string> validate_config(const std::string& path, const std::string& command = "");
std::vector<std::string> validate_config(const io::Json& config, const std::string& command = "");

/// Fills defaults, expands file and inline references and checks every
/// field (FieldError). The result is the config embedded in reports.
io::Json resolve_config(const std::string& command, const io::Json& raw, bool require_seed = true);

struct Outcome {
    io::Json result;
    int status = kExitOk;
};

/// Computes the result of a resolved config.
Outcome execute(const std::string& command, const io::Json& resolved);

/// {"schema_version", "version", "command", "config", "result"}.
io::Json make_report(const std::string& command, const io::Json& resolved, const io::Json& result);

const std::vector<std::string>& commands();

}  // namespace chaoslab::cli
