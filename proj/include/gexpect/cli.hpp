#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gexpect/scenarios.hpp"

namespace gexpect::cli {

enum class ReportFormat { csv, md };

struct RunConfig {
    bool list_only = false;
    std::vector<std::string> scenarios;  ///< resolved catalog names, catalog order
    ScenarioParams params;
    std::optional<std::string> out_path;
    ReportFormat format = ReportFormat::csv;
    std::size_t refine_levels = 0;
};

struct ParseResult {
    std::optional<RunConfig> config;  ///< empty when parsing ended the program
    int exit_code = 0;
};

/// Parses `gexpect run ...` / `gexpect list`. Usage text and errors are written
/// to the given streams; a nonzero exit code means the arguments were rejected.
ParseResult parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs the configured scenarios. Exit codes: 0 all assertions passed,
/// 1 some assertion failed, 2 solver or precondition error, 3 output failure.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

int main(int argc, const char* const* argv);

} // namespace gexpect::cli
