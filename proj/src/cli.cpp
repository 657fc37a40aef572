#include "gexpect/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gexpect/report.hpp"

namespace gexpect::cli {

namespace {

std::vector<std::string> split_names(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty()) out.push_back(name);
    }
    return out;
}

std::string valid_names() {
    std::string s;
    for (const auto& n : scenario_names()) s += "  " + n + "\n";
    return s + "  all\n";
}

} // namespace

ParseResult parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sublinear expectations of G-normal vectors and the independence scenarios built on them", "gexpect"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::string> names;
    double h = 0.0, half_width = 0.0, dt = 0.0;
    double tol = cfg.params.config.grid.tolerance;
    double assert_tol = cfg.params.config.tolerance;
    double pair_tol = cfg.params.config.pair_tolerance;
    std::string report = "csv";
    std::string out_path;
    bool no_halving = false;

    auto* run = app.add_subcommand("run", "Run scenarios and report their assertions");
    // "--h" is the grid spacing, so help is long-form only.
    run->set_help_flag("--help", "Print this help message and exit");
    run->add_option("--scenario", names, "Scenario name(s), comma separated, or 'all'")->delimiter(',');
    run->add_option("--sigma-low-sq", cfg.params.sigma_low_sq, "Lower variance")->capture_default_str();
    run->add_option("--sigma-high-sq", cfg.params.sigma_high_sq, "Upper variance")->capture_default_str();
    run->add_option("--alpha", cfg.params.alpha, "Second-axis scaling in symmetry-identity")->capture_default_str();
    run->add_option("--h", h, "Grid spacing (default derived per axis)")->check(CLI::PositiveNumber);
    run->add_option("--L", half_width, "Truncation half-width (default derived)")->check(CLI::PositiveNumber);
    run->add_option("--dt", dt, "Time step (default derived from the monotonicity bound)")->check(CLI::PositiveNumber);
    run->add_option("--t", cfg.params.horizon, "Horizon; scales every variance interval")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--tol", tol, "Target solver tolerance (domain truncation)")->check(CLI::PositiveNumber)->capture_default_str();
    run->add_option("--assert-tol", assert_tol, "Absolute tolerance of equality assertions")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--pair-tol", pair_tol, "Tolerance of identities between two nested values")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--out", out_path, "Write the report to this file");
    run->add_option("--report", report, "Report format")->check(CLI::IsMember({"csv", "md"}))->capture_default_str();
    run->add_option("--refine", cfg.refine_levels, "Rerun at h/2 .. h/2^k and append refinement_delta columns")
        ->capture_default_str();
    run->add_flag("--no-halving", no_halving, "Skip the per-solve h/2 rerun that feeds error estimates");
    std::string config_path;
    run->add_option("--config", config_path, "key = value file with the same keys as the flags; flags take precedence");

    auto* list = app.add_subcommand("list", "List scenario names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return {std::nullopt, code == 0 ? 0 : 2};
    }

    if (!config_path.empty()) {
        try {
            for (const auto& item : CLI::ConfigTOML().from_file(config_path)) {
                if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents.front() == "run")) continue;
                CLI::Option* opt = run->get_option_no_throw("--" + item.name);
                if (opt == nullptr || item.name == "config") {
                    err << "unknown key '" << item.name << "' in " << config_path << '\n';
                    return {std::nullopt, 2};
                }
                if (opt->count() > 0) continue;
                opt->add_result(item.inputs);
                opt->run_callback();
            }
        } catch (const CLI::Error& e) {
            err << config_path << ": " << e.what() << '\n';
            return {std::nullopt, 2};
        }
    }

    if (list->parsed()) {
        cfg.list_only = true;
        return {cfg, 0};
    }

    for (const auto& n : split_names(names)) {
        if (n == "all") {
            cfg.scenarios = scenario_names();
            break;
        }
        if (!is_scenario(n)) {
            err << "unknown scenario '" << n << "'; valid names:\n" << valid_names();
            return {std::nullopt, 2};
        }
        cfg.scenarios.push_back(n);
    }
    if (cfg.scenarios.empty()) {
        err << "no scenario given; valid names:\n" << valid_names();
        return {std::nullopt, 2};
    }
    // Catalog order, without duplicates.
    std::vector<std::string> ordered;
    for (const auto& n : scenario_names())
        if (std::find(cfg.scenarios.begin(), cfg.scenarios.end(), n) != cfg.scenarios.end()) ordered.push_back(n);
    cfg.scenarios = ordered;

    const auto& p = cfg.params;
    if (!(p.sigma_low_sq >= 0.0) || !(p.sigma_high_sq >= p.sigma_low_sq) || !std::isfinite(p.sigma_high_sq)) {
        err << "variances must satisfy 0 <= sigma-low-sq <= sigma-high-sq\n";
        return {std::nullopt, 2};
    }
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
        err << "alpha must be positive\n";
        return {std::nullopt, 2};
    }
    if (cfg.refine_levels > 6) {
        err << "--refine is limited to 6 levels\n";
        return {std::nullopt, 2};
    }

    auto& grid = cfg.params.config.grid;
    if (run->count("--h")) grid.spacing = h;
    if (run->count("--L")) grid.half_width = half_width;
    if (run->count("--dt")) grid.dt = dt;
    grid.tolerance = tol;
    grid.refine = !no_halving;
    cfg.params.config.tolerance = assert_tol;
    cfg.params.config.pair_tolerance = pair_tol;
    cfg.format = report == "md" ? ReportFormat::md : ReportFormat::csv;
    if (!out_path.empty()) cfg.out_path = out_path;
    return {cfg, 0};
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.list_only) {
        for (const auto& n : scenario_names()) out << n << '\n';
        return 0;
    }
    std::vector<ReportEntry> entries;
    try {
        for (const auto& name : config.scenarios) {
            ReportEntry entry{run_scenario(name, config.params), {}};
            for (std::size_t level = 1; level <= config.refine_levels; ++level) {
                ScenarioParams fine = config.params;
                fine.config.grid.spacing_scale *= std::ldexp(1.0, -static_cast<int>(level));
                if (fine.config.grid.dt) *fine.config.grid.dt *= std::ldexp(1.0, -2 * static_cast<int>(level));
                entry.refinements.push_back(run_scenario(name, fine));
            }
            entries.push_back(std::move(entry));
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const auto rows = report_rows(entries);
    auto render = [&](std::ostream& os) {
        if (config.format == ReportFormat::md)
            write_markdown(os, rows, config.refine_levels);
        else
            write_csv(os, rows, config.refine_levels);
    };

    write_summary(out, entries);
    if (config.out_path) {
        std::ofstream file(*config.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << *config.out_path << " for writing\n";
            return 3;
        }
        render(file);
        file.flush();
        if (!file) {
            err << "error: failed writing " << *config.out_path << '\n';
            return 3;
        }
    } else {
        out << '\n';
        render(out);
    }

    bool all = true;
    for (const auto& e : entries) all = all && e.outcome.passed();
    return all ? 0 : 1;
}

int main(int argc, const char* const* argv) {
    ParseResult parsed = parse_args(argc, argv, std::cout, std::cerr);
    if (!parsed.config) return parsed.exit_code;
    return execute(*parsed.config, std::cout, std::cerr);
}

} // namespace gexpect::cli
