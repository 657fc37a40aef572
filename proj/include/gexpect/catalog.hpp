#pragma once

// Shipped test functions: monomials up to degree four, |x|, x⁺, hinges, the
// bivariate witnesses x·y² and their (x ± y) composites, and bounded clamps.

#include <vector>

#include "gexpect/test_function.hpp"

namespace gexpect::catalog {

TestFunction constant(double c, std::size_t arity = 1);
/// x^k, 0 <= k <= 4.
TestFunction monomial(int k);
TestFunction abs();
TestFunction positive_part();
TestFunction negative_part();
/// x ↦ left·x for x < 0, right·x for x >= 0.
TestFunction hinge(double left_slope, double right_slope);

/// (x, y) ↦ x·y².
TestFunction x_y2();
/// (x, y) ↦ x²·y.
TestFunction x2_y();
/// (x, y) ↦ x·y.
TestFunction xy();
/// (x, y) ↦ x² + y².
TestFunction sum_squares();
/// (x, y) ↦ x² - y².
TestFunction diff_squares();
/// (x, y) ↦ (x + y)·(x - y)², i.e. U V² for U = x + y, V = x - y.
TestFunction u_v2();
/// (x, y) ↦ (x - y)·(x + y)², i.e. V U².
TestFunction v_u2();
/// Coordinate projection x ↦ x_i^k on R^arity.
TestFunction coordinate_power(std::size_t arity, std::size_t i, int k);
/// (x_1..x_n) ↦ Σ_ij a_ij x_i x_j.
TestFunction quadratic_form(const Eigen::MatrixXd& a);

/// One-dimensional functions used in oracle and symmetry checks.
std::vector<TestFunction> univariate();
/// Two-dimensional functions used in the (U, V) swap checks.
std::vector<TestFunction> bivariate();
/// Bounded Lipschitz clamps of the univariate catalogue.
std::vector<TestFunction> bounded_univariate(double bound = 4.0);

} // namespace gexpect::catalog
