#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gexpect/error.hpp"

namespace gexpect {

/// Shape tags a test function may declare. The convex/concave tags select the
/// volatility endpoint in the closed-form oracle, so they must be truthful.
enum ShapeTag : unsigned {
    kNoShape = 0,
    kConvex = 1U << 0,
    kConcave = 1U << 1,
    kBounded = 1U << 2,
};

/// Local-Lipschitz growth data: |φ(x) - φ(y)| <= C (1 + |x|^m + |y|^m) |x - y|.
struct Growth {
    int order = 0;          ///< m
    double constant = 1.0;  ///< C
};

/// A scalar function on Rⁿ with declared polynomial-growth Lipschitz data.
///
/// The declared growth is spot-checked on pseudo-random pairs at construction;
/// a violated bound throws PreconditionError. Growth data sizes the truncated
/// domains of the PDE solvers, so an understated bound is a real error.
class TestFunction {
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    TestFunction(std::string name, std::size_t arity, Evaluator f, Growth growth, unsigned tags = kNoShape,
                 std::vector<double> kinks = {});

    double operator()(std::span<const double> x) const;
    double operator()(std::initializer_list<double> x) const;
    double operator()(double x) const;

    const std::string& name() const noexcept { return name_; }
    std::size_t arity() const noexcept { return arity_; }
    const Growth& growth() const noexcept { return growth_; }
    unsigned tags() const noexcept { return tags_; }
    bool convex() const noexcept { return (tags_ & kConvex) != 0; }
    bool concave() const noexcept { return (tags_ & kConcave) != 0; }
    bool bounded() const noexcept { return (tags_ & kBounded) != 0; }
    /// Points where a one-dimensional function is not smooth (quadrature breakpoints).
    const std::vector<double>& kinks() const noexcept { return kinks_; }

    TestFunction renamed(std::string name) const;
    TestFunction negated() const;
    TestFunction scaled(double lambda) const;
    TestFunction plus(const TestFunction& other) const;
    TestFunction plus_constant(double c) const;
    /// y ↦ φ(A y); the result has arity A.cols().
    TestFunction compose_linear(const Eigen::MatrixXd& a) const;
    /// x ↦ φ(-x).
    TestFunction reflected() const;
    /// x ↦ clamp(φ(x), lo, hi); bounded, same Lipschitz data.
    TestFunction clamped(double lo, double hi) const;

    /// Growth bound C (1 + |x|^m + |y|^m) |x - y| evaluated at a pair of points.
    double growth_bound(std::span<const double> x, std::span<const double> y) const;

private:
    void spot_check() const;

    std::string name_;
    std::size_t arity_;
    Evaluator f_;
    Growth growth_;
    unsigned tags_;
    std::vector<double> kinks_;
};

} // namespace gexpect
