#pragma once

// Monotone explicit finite-difference solvers for the G-heat equation
//   ∂ₜu = G(D²u),  u(0, ·) = φ,
// whose solution gives u(t, x) = Ê[φ(x + √t X)] for X ~ N(0, Γ).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gexpect/gamma.hpp"
#include "gexpect/grid.hpp"
#include "gexpect/simd/kernels.hpp"
#include "gexpect/test_function.hpp"

namespace gexpect {

struct SolveReport {
    double value = 0.0;
    double boundary_influence_estimate = 0.0;
    std::optional<double> refinement_delta;  ///< |value(h) - value(h/2)| when refinement ran
    std::size_t steps_taken = 0;
    bool degenerate = false;                 ///< some σ̲² = 0: convergence only in the viscosity sense
    std::vector<AxisGrid> axes;              ///< grid of the reported value
    double dt = 0.0;

    double error_estimate() const noexcept { return boundary_influence_estimate + refinement_delta.value_or(0.0); }
};

/// Values of a scalar field on a tensor grid, axis 0 slowest.
struct Field {
    std::vector<AxisGrid> axes;
    std::vector<double> values;

    std::size_t size() const noexcept;
    std::size_t stride(std::size_t axis) const noexcept;
    std::size_t centre_index() const noexcept;
};

/// φ on every node; throws DomainError on non-finite values.
Field tabulate(std::vector<AxisGrid> axes, const TestFunction& phi);

/// Explicit step u ← u + dt Σ_a Ḡ_a(D²_a u) on a tensor grid. Axes without an
/// interval do not diffuse. Nodes on the boundary of a diffusing axis are frozen,
/// which is the zero-curvature extrapolation (Ḡ(0) = 0).
class DiagHeatSolver {
public:
    DiagHeatSolver(std::vector<AxisGrid> axes, std::vector<std::optional<UncertaintyInterval>> diffusion, double dt);

    /// Largest monotone time step: courant / Σ_a σ̄_a² / h_a².
    static double max_dt(std::span<const AxisGrid> axes, std::span<const std::optional<UncertaintyInterval>> diffusion,
                         double courant);

    /// One step from `in` into `out`. Returns the largest |update| within three
    /// nodes of the boundary of a diffusing axis.
    double step(std::span<const double> in, std::span<double> out) const;

    /// `steps` steps in place; returns the sum of the per-step boundary-band maxima.
    double evolve(std::vector<double>& values, std::size_t steps) const;

private:
    std::vector<AxisGrid> axes_;
    std::vector<std::size_t> strides_;
    std::vector<bool> active_;
    std::vector<double> hi_;
    std::vector<double> lo_;
    std::size_t size_ = 0;
};

/// Explicit step with flux max_g ½tr[B_g D²ₕu] on a uniform 2D grid using the
/// nine-point stencil with upwinded cross differences. Generators must be
/// diagonally dominant for the step to be monotone.
class HullHeatSolver {
public:
    HullHeatSolver(std::vector<AxisGrid> axes, const ConvexHull& hull, double dt);

    static double max_dt(double spacing, const ConvexHull& hull, double courant);

    double step(std::span<const double> in, std::span<double> out) const;
    double evolve(std::vector<double>& values, std::size_t steps) const;

private:
    std::vector<AxisGrid> axes_;
    std::vector<simd::HullCoeffs> coeffs_;
};

/// Throws InadmissibleError naming the first generator with b_ii < Σ_{j≠i} |b_ij|.
void require_diagonally_dominant(const ConvexHull& hull);

/// u(t, x0) for ∂ₜu = Ḡ(u_xx), u(0, ·) = φ.
SolveReport solve_gheat_1d(const UncertaintyInterval& iv, const TestFunction& phi, double t, double x0,
                           const GridConfig& cfg = {});

/// u(t, x0) for ∂ₜu = Σ_i Ḡ_i(∂²_ii u); at most three dimensions.
SolveReport solve_gheat_diag(const GammaSet& box, const TestFunction& phi, double t, std::span<const double> x0,
                             const GridConfig& cfg = {});

/// u(t, x0) for ∂ₜu = max_g ½tr[B_g D²u] over a two-dimensional hull.
SolveReport solve_gheat_hull(const GammaSet& hull, const TestFunction& phi, double t, std::span<const double> x0,
                             const GridConfig& cfg = {});

} // namespace gexpect
