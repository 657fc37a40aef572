#pragma once

// Numerical witnesses for the independence results on G-normal vectors. Each
// runner computes the quantities behind one statement and records pass/fail
// assertions with explicit margins.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gexpect/gamma.hpp"
#include "gexpect/grid.hpp"

namespace gexpect {

struct Quantity {
    std::string label;
    double value = 0.0;
    double error_estimate = 0.0;
};

struct Assertion {
    std::string description;
    std::string quantity;  ///< label of the quantity this assertion is reported under
    bool pass = false;
    double margin = 0.0;   ///< >= 0 exactly when pass
    std::string rule;      ///< how the margin was computed
    std::string tag;       ///< e.g. "classical-zero" when a positivity claim was replaced
};

struct ScenarioOutcome {
    std::string name;
    std::vector<Quantity> quantities;
    std::vector<Assertion> assertions;
    double runtime_ms = 0.0;

    bool passed() const noexcept;
    /// Throws PreconditionError for an unknown label.
    const Quantity& quantity(std::string_view label) const;
};

/// What a runner does when the interval has no variance uncertainty.
enum class ClassicalPolicy {
    reject,          ///< precondition error
    classical_zero,  ///< replace strict-positivity claims by their classical zero counterparts
};

struct ScenarioConfig {
    GridConfig grid;
    double tolerance = 1e-2;       ///< absolute tolerance of equality assertions
    double pair_tolerance = 2e-2;  ///< tolerance for identities between two nested values
    double positivity_factor = 10.0;
    ClassicalPolicy classical = ClassicalPolicy::reject;
};

ScenarioOutcome run_asymmetric_independence(const UncertaintyInterval& iv1, const UncertaintyInterval& iv2,
                                            const ScenarioConfig& cfg);

ScenarioOutcome run_linear_combination(const UncertaintyInterval& iv, const ScenarioConfig& cfg);

/// ⟨v, AY⟩ for the sequential vector Y with every coordinate on `iv`; `tag`
/// prefixes the labels so several (A, v) cases can share one outcome.
ScenarioOutcome run_linear_image(const UncertaintyInterval& iv, const Eigen::MatrixXd& a, const Eigen::VectorXd& v,
                                 const ScenarioConfig& cfg, const std::string& tag = {});

ScenarioOutcome run_symmetry_identity(const UncertaintyInterval& iv, double alpha, const ScenarioConfig& cfg);

ScenarioOutcome run_diag_not_indep(const UncertaintyInterval& iv, const ScenarioConfig& cfg);

ScenarioOutcome run_quadratic_form(const std::vector<UncertaintyInterval>& intervals, const std::vector<std::size_t>& pi,
                                   const SymMatrix& a, const ScenarioConfig& cfg, const std::string& tag = {});

/// Positions i < j along the order π (0-based).
ScenarioOutcome run_reverse_independence_witness(const std::vector<UncertaintyInterval>& intervals,
                                                 const std::vector<std::size_t>& pi, std::size_t i, std::size_t j,
                                                 const ScenarioConfig& cfg);

struct NamedMatrix {
    std::string name;
    Eigen::Matrix2d matrix;
};

/// Identity, antidiagonal, diag(2,3), rotations in 15° steps and shears.
std::vector<NamedMatrix> invertible_scan_catalog();

ScenarioOutcome run_invertible_scan(const UncertaintyInterval& iv, const std::vector<NamedMatrix>& sample,
                                    const ScenarioConfig& cfg);

/// Parameters shared by every catalog entry.
struct ScenarioParams {
    double sigma_low_sq = 1.0;
    double sigma_high_sq = 4.0;
    double alpha = 4.0;
    double horizon = 1.0;  ///< scales every variance interval by t
    ScenarioConfig config;
};

/// Catalog order, which is also the report order.
const std::vector<std::string>& scenario_names();
bool is_scenario(std::string_view name);

/// Runs a catalog scenario with its default cases at the given parameters.
ScenarioOutcome run_scenario(std::string_view name, const ScenarioParams& params);

} // namespace gexpect
