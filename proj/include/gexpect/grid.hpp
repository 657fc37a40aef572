#pragma once

// Discretisation of the truncated domain [-L, L]ⁿ.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gexpect/test_function.hpp"

namespace gexpect {

/// Solver configuration. Unset overrides are derived from the uncertainty set,
/// the horizon and the test function's growth data.
struct GridConfig {
    std::optional<double> spacing;     ///< absolute h, every axis
    std::optional<double> half_width;  ///< absolute L, every axis
    std::optional<double> dt;          ///< time step; must respect the monotonicity bound
    double spacing_fraction = 0.05;    ///< default h = min(0.02 L, fraction·σ̄√t) per axis
    double width_sigmas = 8.0;         ///< initial k in L = |x0| + k σ̄ √t
    double courant = 1.0 / 3.0;        ///< dt = courant / Σ_i σ̄_i²/h_i²
    double tolerance = 1e-3;           ///< target tolerance driving domain enlargement
    double spacing_scale = 1.0;        ///< multiplies h (refinement studies)
    bool refine = true;                ///< also solve at h/2: report the fine value and |Δ|
};

/// One axis of a uniform grid: nodes x_i = (i - half_nodes)·spacing, symmetric about 0.
struct AxisGrid {
    double spacing = 0.0;
    std::size_t half_nodes = 0;

    double half_width() const noexcept { return spacing * static_cast<double>(half_nodes); }
    std::size_t nodes() const noexcept { return 2 * half_nodes + 1; }
    double coord(std::size_t i) const noexcept {
        return (static_cast<double>(i) - static_cast<double>(half_nodes)) * spacing;
    }
    /// Same domain, half the spacing.
    AxisGrid refined() const noexcept { return {spacing * 0.5, half_nodes * 2}; }
};

/// Resolved space-time discretisation.
struct GridSpec {
    std::vector<AxisGrid> axes;
    double horizon = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
};

/// Truncation half-width for one axis: L = |x0| + k σ√t with k grown from
/// cfg.width_sigmas until C(1+L)^m exp(-k²/2) < 0.1·tolerance.
double truncation_half_width(double sigma_sqrt_t, double x0_abs, const Growth& growth, const GridConfig& cfg);

/// Axis grid for standard deviation scale `sigma_sqrt_t` (σ̄√t along that axis).
/// Throws DomainError when |x0| exceeds an overridden half-width.
AxisGrid resolve_axis(double sigma_sqrt_t, double x0_abs, const Growth& growth, const GridConfig& cfg);

/// Time stepping for a bound dt_max: dt = t/steps with steps = ceil(t/dt_max),
/// or the override cfg.dt if it respects dt_max (CflError otherwise).
void resolve_time(GridSpec& spec, double t, double dt_max, const GridConfig& cfg);

/// Multilinear interpolation of tensor data (axis 0 slowest) at a point.
double interpolate(std::span<const AxisGrid> axes, std::span<const double> values, std::span<const double> x);

} // namespace gexpect
