#include "gexpect/catalog.hpp"

#include <cmath>
#include <string>

namespace gexpect::catalog {

TestFunction constant(double c, std::size_t arity) {
    return TestFunction("const(" + std::to_string(c) + ")", arity, [c](std::span<const double>) { return c; },
                        {0, 1.0}, kConvex | kConcave | kBounded);
}

TestFunction monomial(int k) {
    switch (k) {
    case 0: return constant(1.0).renamed("1");
    case 1: return TestFunction("x", 1, [](std::span<const double> x) { return x[0]; }, {0, 1.0}, kConvex | kConcave);
    case 2: return TestFunction("x^2", 1, [](std::span<const double> x) { return x[0] * x[0]; }, {1, 2.0}, kConvex);
    case 3:
        return TestFunction("x^3", 1, [](std::span<const double> x) { return x[0] * x[0] * x[0]; }, {2, 3.0});
    case 4:
        return TestFunction("x^4", 1, [](std::span<const double> x) { const double s = x[0] * x[0]; return s * s; },
                            {3, 4.0}, kConvex);
    default: throw PreconditionError("monomial degree must be between 0 and 4");
    }
}

TestFunction abs() {
    return TestFunction("|x|", 1, [](std::span<const double> x) { return std::abs(x[0]); }, {0, 1.0}, kConvex, {0.0});
}

TestFunction positive_part() {
    return TestFunction("x+", 1, [](std::span<const double> x) { return x[0] > 0.0 ? x[0] : 0.0; }, {0, 1.0}, kConvex,
                        {0.0});
}

TestFunction negative_part() {
    return TestFunction("x-", 1, [](std::span<const double> x) { return x[0] < 0.0 ? -x[0] : 0.0; }, {0, 1.0},
                        kConvex, {0.0});
}

TestFunction hinge(double left_slope, double right_slope) {
    unsigned tags = kNoShape;
    if (right_slope >= left_slope) tags |= kConvex;
    if (right_slope <= left_slope) tags |= kConcave;
    const double lip = std::max(std::abs(left_slope), std::abs(right_slope));
    return TestFunction("hinge(" + std::to_string(left_slope) + "," + std::to_string(right_slope) + ")", 1,
                        [left_slope, right_slope](std::span<const double> x) {
                            return x[0] < 0.0 ? left_slope * x[0] : right_slope * x[0];
                        },
                        {0, std::max(lip, 1e-300)}, tags, {0.0});
}

TestFunction x_y2() {
    return TestFunction("x*y^2", 2, [](std::span<const double> z) { return z[0] * z[1] * z[1]; }, {2, 2.0});
}

TestFunction x2_y() {
    return TestFunction("x^2*y", 2, [](std::span<const double> z) { return z[0] * z[0] * z[1]; }, {2, 2.0});
}

TestFunction xy() {
    return TestFunction("x*y", 2, [](std::span<const double> z) { return z[0] * z[1]; }, {1, 1.0});
}

TestFunction sum_squares() {
    return TestFunction("x^2+y^2", 2, [](std::span<const double> z) { return z[0] * z[0] + z[1] * z[1]; }, {1, 2.0},
                        kConvex);
}

TestFunction diff_squares() {
    return TestFunction("x^2-y^2", 2, [](std::span<const double> z) { return z[0] * z[0] - z[1] * z[1]; }, {1, 2.0});
}

TestFunction u_v2() {
    return TestFunction("(x+y)*(x-y)^2", 2,
                        [](std::span<const double> z) {
                            const double v = z[0] - z[1];
                            return (z[0] + z[1]) * v * v;
                        },
                        {2, 9.0});
}

TestFunction v_u2() {
    return TestFunction("(x-y)*(x+y)^2", 2,
                        [](std::span<const double> z) {
                            const double u = z[0] + z[1];
                            return (z[0] - z[1]) * u * u;
                        },
                        {2, 9.0});
}

TestFunction coordinate_power(std::size_t arity, std::size_t i, int k) {
    if (i >= arity) throw DimensionError("coordinate_power: index out of range");
    const TestFunction base = monomial(k);
    Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(arity));
    sel(0, static_cast<Eigen::Index>(i)) = 1.0;
    return base.compose_linear(sel).renamed("x" + std::to_string(i + 1) + "^" + std::to_string(k));
}

TestFunction quadratic_form(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() == 0) throw DimensionError("quadratic_form: matrix must be square");
    const double c = 2.0 * std::max(a.norm(), 1e-300);
    return TestFunction("<Ax,x>", static_cast<std::size_t>(a.rows()),
                        [a](std::span<const double> x) {
                            const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
                            return v.dot(a * v);
                        },
                        {1, c});
}

std::vector<TestFunction> univariate() {
    return {monomial(1), monomial(2), monomial(3), monomial(4), abs(), positive_part(), monomial(2).negated(),
            hinge(1.0, 4.0)};
}

std::vector<TestFunction> bivariate() {
    return {x_y2(), x2_y(), xy(), diff_squares(), sum_squares(), x_y2().clamped(-4.0, 4.0)};
}

std::vector<TestFunction> bounded_univariate(double bound) {
    std::vector<TestFunction> out;
    for (const auto& f : univariate()) out.push_back(f.clamped(-bound, bound));
    return out;
}

} // namespace gexpect::catalog
