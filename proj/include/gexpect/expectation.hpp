#pragma once

// Sublinear expectations Ê[φ(X)] for G-normal, sequentially independent,
// maximally distributed and linearly transformed random vectors.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gexpect/gamma.hpp"
#include "gexpect/grid.hpp"
#include "gexpect/pde.hpp"
#include "gexpect/test_function.hpp"

namespace gexpect {

class RandomVectorSpec;

/// X ~ N(0, Γ).
struct GNormal {
    GammaSet gamma;
};

/// X_k ~ N(0, [σ̲_k², σ̄_k²]) with X_{π(i+1)} independent from (X_{π(1)}, ..., X_{π(i)}).
/// `order` holds π as 0-based indices; empty means the identity.
struct Sequential {
    std::vector<UncertaintyInterval> intervals;
    std::vector<std::size_t> order;
};

/// Ê[φ(X)] = sup over the support: a finite point set or an axis-aligned box.
struct Maximal {
    std::vector<Eigen::VectorXd> points;
    std::vector<std::pair<double, double>> box;  ///< per-axis [lo, hi]; used when `points` is empty
};

/// A X for a real m×n matrix A and an n-dimensional inner vector.
struct LinearImage {
    Eigen::MatrixXd matrix;
    std::shared_ptr<const RandomVectorSpec> inner;
};

class RandomVectorSpec {
public:
    using Variant = std::variant<GNormal, Sequential, Maximal, LinearImage>;

    static RandomVectorSpec gnormal(GammaSet gamma);
    static RandomVectorSpec sequential(std::vector<UncertaintyInterval> intervals, std::vector<std::size_t> order = {});
    static RandomVectorSpec maximal_points(std::vector<Eigen::VectorXd> points);
    static RandomVectorSpec maximal_box(std::vector<std::pair<double, double>> box);
    static RandomVectorSpec linear_image(Eigen::MatrixXd a, RandomVectorSpec inner);

    std::size_t dim() const noexcept { return dim_; }
    const Variant& variant() const noexcept { return v_; }

private:
    RandomVectorSpec(Variant v, std::size_t dim) : v_(std::move(v)), dim_(dim) {}
    Variant v_;
    std::size_t dim_;
};

struct ExpectationResult {
    enum class Method { pde, nested, maximal, oracle };

    double value = 0.0;
    double error_estimate = 0.0;
    Method method = Method::pde;
    std::vector<SolveReport> diagnostics;
};

std::string_view method_name(ExpectationResult::Method m) noexcept;

ExpectationResult expect(const RandomVectorSpec& spec, const TestFunction& phi, const GridConfig& cfg = {});

/// u(t, x0) = Ê[φ(x0 + √t X)] for X ~ N(0, Γ). An empty x0 means the origin.
ExpectationResult expect_gnormal(const GammaSet& gamma, const TestFunction& phi, double t = 1.0,
                                 std::span<const double> x0 = {}, const GridConfig& cfg = {});

/// Backward recursion ψ_n = φ, ψ_{k-1} = Ê[ψ_k(.., X_{π(k)})], one batch of 1D
/// solves per level on a shared tensor grid. At most three variables.
ExpectationResult expect_sequential(std::span<const UncertaintyInterval> intervals, std::span<const std::size_t> order,
                                    const TestFunction& phi, const GridConfig& cfg = {});

ExpectationResult expect_maximal(const Maximal& support, const TestFunction& phi);

/// -Ê[-φ(X)].
ExpectationResult lower_expectation(const RandomVectorSpec& spec, const TestFunction& phi, const GridConfig& cfg = {});

/// Classical normal expectation at σ̄ (convex φ) or σ̲ (concave φ) by quadrature:
/// 64-node Gauss–Hermite for smooth φ, piecewise Gauss–Legendre across declared kinks.
double convex_oracle_1d(const UncertaintyInterval& iv, const TestFunction& phi);

struct MeanCertaintyCheck {
    double with_linear = 0.0;     ///< Ê[ψ(Y_1..Y_k) + α Y_{k+1}]
    double without_linear = 0.0;  ///< Ê[ψ(Y_1..Y_k)]
    double tolerance = 0.0;
    bool pass = false;
};

/// Compares Ê[ψ(Y_1..Y_k) + α Y_{k+1}] with Ê[ψ(Y_1..Y_k)] for the sequential
/// vector over `intervals` (k + 1 of them, natural order); `psi` has arity k.
MeanCertaintyCheck mean_certainty_check(std::span<const UncertaintyInterval> intervals, const TestFunction& psi,
                                        double alpha, const GridConfig& cfg = {});

} // namespace gexpect
