#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gexpect::quadrature {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Physicists' Gauss–Hermite rule: ∫ f(x) e^{-x²} dx ≈ Σ w_i f(x_i). Golub–Welsch.
Rule gauss_hermite(std::size_t n);

/// Gauss–Legendre rule on [-1, 1].
Rule gauss_legendre(std::size_t n);

/// E[f(σ Z)], Z ~ N(0, 1), by an n-point Gauss–Hermite rule.
double normal_expectation(const std::function<double(double)>& f, double sigma, std::size_t n = 64);

/// E[f(σ Z)] for f smooth between the given breakpoints (in x units): Gauss–Legendre
/// on each piece of the standard-normal density, truncated at |z| = 12.
double normal_expectation_piecewise(const std::function<double(double)>& f, double sigma,
                                    std::span<const double> breakpoints, std::size_t n = 64);

} // namespace gexpect::quadrature
