#pragma once

// CSV and Markdown renderings of scenario outcomes. Numbers use the shortest
// round-trip representation with '.' as decimal separator, independent of locale.

#include <ostream>
#include <string>
#include <vector>

#include "gexpect/scenarios.hpp"

namespace gexpect {

/// A scenario outcome together with the same scenario rerun at h/2, h/4, ...
struct ReportEntry {
    ScenarioOutcome outcome;
    std::vector<ScenarioOutcome> refinements;
};

struct ReportRow {
    std::string scenario;
    std::string label;
    double value = 0.0;
    double error_estimate = 0.0;
    bool has_assertion = false;
    std::string assertion;
    bool pass = false;
    double margin = 0.0;
    std::vector<double> refinement_deltas;  ///< |value(h/2^i) - value(h/2^(i-1))|, i = 1..k
};

/// One row per (quantity, assertion) pair, or a single row for a quantity
/// without assertions; catalog order, then quantity declaration order.
std::vector<ReportRow> report_rows(const std::vector<ReportEntry>& entries);

std::string format_number(double v);

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows, std::size_t refine_levels);
void write_markdown(std::ostream& os, const std::vector<ReportRow>& rows, std::size_t refine_levels);
void write_summary(std::ostream& os, const std::vector<ReportEntry>& entries);

} // namespace gexpect
