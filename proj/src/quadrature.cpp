#include "gexpect/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "gexpect/error.hpp"

namespace gexpect::quadrature {

namespace {

// Golub–Welsch on a symmetric tridiagonal Jacobi matrix with zero diagonal.
Rule jacobi_rule(std::size_t n, double mu0, double (*offdiag)(std::size_t)) {
    if (n == 0) throw PreconditionError("quadrature rule needs at least one node");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k < n; ++k) {
        const double b = offdiag(k);
        j(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
        j(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, static_cast<Eigen::Index>(i));
        r.nodes[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
        r.weights[i] = mu0 * v0 * v0;
    }
    return r;
}

const Rule& cached(std::map<std::size_t, Rule>& cache, std::mutex& mu, std::size_t n, Rule (*make)(std::size_t)) {
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

} // namespace

Rule gauss_hermite(std::size_t n) {
    return jacobi_rule(n, std::sqrt(std::numbers::pi),
                       [](std::size_t k) { return std::sqrt(static_cast<double>(k) / 2.0); });
}

Rule gauss_legendre(std::size_t n) {
    return jacobi_rule(n, 2.0, [](std::size_t k) {
        const double kk = static_cast<double>(k);
        return kk / std::sqrt(4.0 * kk * kk - 1.0);
    });
}

double normal_expectation(const std::function<double(double)>& f, double sigma, std::size_t n) {
    static std::map<std::size_t, Rule> cache;
    static std::mutex mu;
    const Rule& r = cached(cache, mu, n, &gauss_hermite);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * f(std::numbers::sqrt2 * sigma * r.nodes[i]);
    return s / std::sqrt(std::numbers::pi);
}

double normal_expectation_piecewise(const std::function<double(double)>& f, double sigma,
                                    std::span<const double> breakpoints, std::size_t n) {
    if (sigma == 0.0) return f(0.0);
    static std::map<std::size_t, Rule> cache;
    static std::mutex mu;
    const Rule& r = cached(cache, mu, n, &gauss_legendre);
    constexpr double kCut = 12.0;
    std::vector<double> cuts{-kCut, kCut};
    for (double b : breakpoints) {
        const double z = b / sigma;
        if (std::abs(z) < kCut) cuts.push_back(z);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = mid + half * r.nodes[i];
            s += r.weights[i] * f(sigma * z) * std::exp(-0.5 * z * z);
        }
        total += half * s * inv_sqrt_2pi;
    }
    return total;
}

} // namespace gexpect::quadrature
