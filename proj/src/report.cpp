#include "gexpect/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace gexpect {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string md_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::vector<std::string> cells(const ReportRow& r, std::size_t refine_levels) {
    std::vector<std::string> c{r.scenario, r.label, format_number(r.value), format_number(r.error_estimate)};
    if (r.has_assertion) {
        c.push_back(r.assertion);
        c.push_back(r.pass ? "true" : "false");
        c.push_back(format_number(r.margin));
    } else {
        c.insert(c.end(), {"", "", ""});
    }
    for (std::size_t i = 0; i < refine_levels; ++i)
        c.push_back(i < r.refinement_deltas.size() ? format_number(r.refinement_deltas[i]) : "");
    return c;
}

std::vector<std::string> header(std::size_t refine_levels) {
    std::vector<std::string> h{"scenario", "label", "value", "error_estimate", "assertion", "pass", "margin"};
    for (std::size_t i = 1; i <= refine_levels; ++i) h.push_back("refinement_delta_" + std::to_string(i));
    return h;
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

std::vector<ReportRow> report_rows(const std::vector<ReportEntry>& entries) {
    std::vector<ReportRow> rows;
    for (const auto& e : entries) {
        const auto& o = e.outcome;
        for (std::size_t qi = 0; qi < o.quantities.size(); ++qi) {
            const auto& q = o.quantities[qi];
            ReportRow base;
            base.scenario = o.name;
            base.label = q.label;
            base.value = q.value;
            base.error_estimate = q.error_estimate;
            double previous = q.value;
            for (const auto& r : e.refinements) {
                // Reruns list the same quantities in the same order.
                const double v = qi < r.quantities.size() ? r.quantities[qi].value : std::nan("");
                base.refinement_deltas.push_back(std::abs(v - previous));
                previous = v;
            }
            bool any = false;
            for (const auto& a : o.assertions) {
                if (a.quantity != q.label) continue;
                ReportRow row = base;
                row.has_assertion = true;
                row.assertion = a.tag.empty() ? a.description : a.description + " [" + a.tag + "]";
                row.pass = a.pass;
                row.margin = a.margin;
                rows.push_back(std::move(row));
                any = true;
            }
            if (!any) rows.push_back(std::move(base));
        }
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows, std::size_t refine_levels) {
    auto line = [&os](const std::vector<std::string>& c) {
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << csv_field(c[i]);
        os << '\n';
    };
    line(header(refine_levels));
    for (const auto& r : rows) line(cells(r, refine_levels));
}

void write_markdown(std::ostream& os, const std::vector<ReportRow>& rows, std::size_t refine_levels) {
    auto line = [&os](const std::vector<std::string>& c) {
        os << '|';
        for (const auto& s : c) os << ' ' << md_cell(s) << " |";
        os << '\n';
    };
    const auto h = header(refine_levels);
    line(h);
    os << '|';
    for (std::size_t i = 0; i < h.size(); ++i) os << " --- |";
    os << '\n';
    for (const auto& r : rows) line(cells(r, refine_levels));
}

void write_summary(std::ostream& os, const std::vector<ReportEntry>& entries) {
    std::size_t failed = 0, total = 0;
    for (const auto& e : entries) {
        const auto& o = e.outcome;
        os << (o.passed() ? "PASS " : "FAIL ") << o.name << " (" << o.assertions.size() << " assertions, "
           << static_cast<long long>(std::llround(o.runtime_ms)) << " ms)\n";
        for (const auto& a : o.assertions) {
            ++total;
            if (!a.pass) ++failed;
            os << "  [" << (a.pass ? "ok" : "FAILED") << "] " << a.description;
            if (!a.tag.empty()) os << " [" << a.tag << "]";
            os << "  margin " << format_number(a.margin) << '\n';
        }
    }
    os << (total - failed) << '/' << total << " assertions passed\n";
}

} // namespace gexpect
