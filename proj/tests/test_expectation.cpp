#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gexpect/catalog.hpp"
#include "gexpect/expectation.hpp"

using namespace gexpect;

namespace {

GridConfig coarse() {
    GridConfig c;
    c.spacing_fraction = 0.2;
    return c;
}

const UncertaintyInterval kIv{1, 4};

} // namespace

TEST(Expect, SequentialAsymmetricPair) {
    const auto spec = RandomVectorSpec::sequential({kIv, kIv});
    // Closed form (σ̄² - σ̲²) σ̄ / √(2π) = 3·2/√(2π).
    const double closed = 6.0 / std::sqrt(2.0 * std::numbers::pi);
    const auto r = expect(spec, catalog::x_y2());
    EXPECT_EQ(r.method, ExpectationResult::Method::nested);
    EXPECT_NEAR(r.value, closed, 1e-2);
    EXPECT_NEAR(r.value, 2.3937, 1e-2);
    EXPECT_NEAR(expect(spec, catalog::x2_y(), coarse()).value, 0.0, 1e-6);
}

TEST(Expect, SequentialOrderMatters) {
    const auto reversed = RandomVectorSpec::sequential({kIv, kIv}, {1, 0});
    EXPECT_NEAR(expect(reversed, catalog::x2_y()).value, 2.3937, 1e-2);
    EXPECT_NEAR(expect(reversed, catalog::x_y2(), coarse()).value, 0.0, 1e-6);
}

TEST(Expect, SequentialSumSquares) {
    const auto spec = RandomVectorSpec::sequential({kIv, kIv});
    const TestFunction f("(x+y)^2", 2, [](std::span<const double> x) { return (x[0] + x[1]) * (x[0] + x[1]); },
                         Growth{1, 4.0}, kConvex);
    EXPECT_NEAR(expect(spec, f, coarse()).value, 8.0, 8e-3);
}

TEST(Expect, SequentialBadOrderRejected) {
    EXPECT_THROW(RandomVectorSpec::sequential({kIv, kIv}, {0, 0}), PreconditionError);
    EXPECT_THROW(RandomVectorSpec::sequential({kIv, kIv}, {0}), DimensionError);
}

TEST(Expect, RankOneImage) {
    Eigen::MatrixXd a(1, 2);
    a << 3, 4;
    const auto spec = RandomVectorSpec::linear_image(a, RandomVectorSpec::gnormal(GammaSet::box({{1, 4}, {1, 4}})));
    EXPECT_EQ(spec.dim(), 1u);
    const auto r = expect(spec, catalog::monomial(2));
    EXPECT_NEAR(r.value, 100.0, 0.1);
    Eigen::MatrixXd col(2, 1);
    col << 1, 2;
    const auto img = RandomVectorSpec::linear_image(col, RandomVectorSpec::gnormal(GammaSet::interval({4, 16})));
    EXPECT_NEAR(expect(img, catalog::sum_squares()).value, 80.0, 0.08);
}

TEST(Expect, GNormalScalarMoments) {
    const auto spec = RandomVectorSpec::gnormal(GammaSet::interval(kIv));
    EXPECT_NEAR(expect(spec, catalog::monomial(2)).value, 4.0, 4e-3);
    EXPECT_NEAR(expect(spec, catalog::abs()).value, 2.0 * std::sqrt(2.0 / std::numbers::pi), 2e-3);
}

TEST(Expect, BoxDifferenceOfSquares) {
    const auto spec = RandomVectorSpec::gnormal(GammaSet::box({{1, 4}, {1, 4}}));
    EXPECT_NEAR(expect(spec, catalog::diff_squares(), coarse()).value, 3.0, 3e-3);
}

TEST(Expect, ArityMismatchRejected) {
    const auto spec = RandomVectorSpec::gnormal(GammaSet::interval(kIv));
    EXPECT_THROW(expect(spec, catalog::xy()), DimensionError);
    EXPECT_THROW(expect(RandomVectorSpec::sequential({kIv, kIv}), catalog::abs()), DimensionError);
}

TEST(Maximal, FinitePointSet) {
    const auto spec = RandomVectorSpec::maximal_points({Eigen::Vector2d(1, 2)});
    const auto r = expect(spec, catalog::xy());
    EXPECT_EQ(r.value, 2.0);
    EXPECT_EQ(r.method, ExpectationResult::Method::maximal);
    EXPECT_EQ(r.error_estimate, 0.0);
}

TEST(Maximal, BoxSupremum) {
    const auto box = RandomVectorSpec::maximal_box({{-1, 1}, {-1, 1}});
    const TestFunction sum("x+y", 2, [](std::span<const double> x) { return x[0] + x[1]; }, Growth{0, 2.0});
    EXPECT_NEAR(expect(box, sum).value, 2.0, 1e-9);
    const auto line = RandomVectorSpec::maximal_box({{-1, 1}});
    const auto r = expect(line, catalog::monomial(2).negated());
    EXPECT_NEAR(r.value, 0.0, 1e-6);
    EXPECT_LE(r.error_estimate, 1e-6);
}

TEST(Maximal, EmptySupportRejected) {
    EXPECT_THROW(RandomVectorSpec::maximal_points({}), PreconditionError);
    EXPECT_THROW(RandomVectorSpec::maximal_box({{1, -1}}), PreconditionError);
}

TEST(Lower, ReflectsUpper) {
    const auto spec = RandomVectorSpec::gnormal(GammaSet::interval(kIv));
    EXPECT_NEAR(lower_expectation(spec, catalog::monomial(2)).value, 1.0, 1e-3);
    EXPECT_NEAR(lower_expectation(spec, catalog::monomial(1)).value, 0.0, 1e-9);
    EXPECT_EQ(lower_expectation(spec, catalog::constant(3.5)).value, 3.5);
    EXPECT_LE(lower_expectation(spec, catalog::abs()).value, expect(spec, catalog::abs()).value);
}

TEST(Oracle, ConvexAndConcave) {
    EXPECT_NEAR(convex_oracle_1d(kIv, catalog::monomial(2)), 4.0, 1e-12);
    EXPECT_NEAR(convex_oracle_1d(kIv, catalog::monomial(4)), 48.0, 1e-10);
    EXPECT_NEAR(convex_oracle_1d(kIv, catalog::monomial(2).negated()), -1.0, 1e-12);
    EXPECT_NEAR(convex_oracle_1d(kIv, catalog::abs()), 2.0 * std::sqrt(2.0 / std::numbers::pi), 1e-12);
    EXPECT_NEAR(convex_oracle_1d(kIv, catalog::positive_part()), std::sqrt(2.0 / std::numbers::pi), 1e-12);
    EXPECT_THROW(convex_oracle_1d(kIv, catalog::monomial(3)), PreconditionError);
}

TEST(Oracle, PdeAgreesOnConvexCatalog) {
    for (const auto& f : catalog::univariate()) {
        if (!f.convex() && !f.concave()) continue;
        const auto r = expect_gnormal(GammaSet::interval(kIv), f);
        const double o = convex_oracle_1d(kIv, f);
        EXPECT_NEAR(r.value, o, std::max(1e-3, 5.0 * r.error_estimate)) << f.name();
    }
}

TEST(MeanCertainty, LinearTermDrops) {
    const std::vector<UncertaintyInterval> ivs{kIv, kIv};
    for (double alpha : {-3.0, 0.0, 2.5}) {
        const auto c = mean_certainty_check(ivs, catalog::abs(), alpha, coarse());
        EXPECT_TRUE(c.pass) << alpha << ": " << c.with_linear << " vs " << c.without_linear;
    }
}

TEST(MeanCertainty, ArityChecked) {
    const std::vector<UncertaintyInterval> ivs{kIv, kIv};
    EXPECT_THROW(mean_certainty_check(ivs, catalog::xy(), 1.0), DimensionError);
}

TEST(Properties, SublinearAndMonotone) {
    const auto spec = RandomVectorSpec::gnormal(GammaSet::interval(kIv));
    const auto cat = catalog::bounded_univariate();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
    for (int trial = 0; trial < 4; ++trial) {
        const auto& f = cat[pick(rng)];
        const auto& g = cat[pick(rng)];
        const auto ef = expect(spec, f, coarse());
        const auto eg = expect(spec, g, coarse());
        const auto es = expect(spec, f.plus(g), coarse());
        EXPECT_LE(es.value, ef.value + eg.value + ef.error_estimate + eg.error_estimate + es.error_estimate + 1e-12);
        // Constant preservation and positive homogeneity.
        EXPECT_NEAR(expect(spec, f.plus_constant(2.0), coarse()).value, ef.value + 2.0, 1e-9);
        EXPECT_NEAR(expect(spec, f.scaled(3.0), coarse()).value, 3.0 * ef.value, 1e-9 * std::max(1.0, std::abs(ef.value)));
    }
}

TEST(Properties, GNormalIsSymmetric) {
    const auto spec = RandomVectorSpec::gnormal(GammaSet::interval(kIv));
    for (const auto& f : catalog::univariate()) {
        const double a = expect(spec, f, coarse()).value;
        const double b = expect(spec, f.reflected(), coarse()).value;
        EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(a))) << f.name();
    }
}

TEST(Properties, MethodNames) {
    EXPECT_EQ(method_name(ExpectationResult::Method::pde), "pde");
    EXPECT_EQ(method_name(ExpectationResult::Method::nested), "nested");
}
