#include "gexpect/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace gexpect {

UncertaintyInterval::UncertaintyInterval(double low_sq, double high_sq) : low_(low_sq), high_(high_sq) {
    if (!std::isfinite(low_sq) || !std::isfinite(high_sq) || low_sq < 0.0 || low_sq > high_sq) {
        std::ostringstream os;
        os << "invalid variance interval [" << low_sq << ", " << high_sq
           << "]: need 0 <= sigma_low_sq <= sigma_high_sq";
        throw PreconditionError(os.str());
    }
}

UncertaintyInterval UncertaintyInterval::scaled(double factor) const {
    if (!(factor >= 0.0)) throw PreconditionError("interval scale factor must be non-negative");
    return {low_ * factor, high_ * factor};
}

SymMatrix::SymMatrix(std::size_t n) : m_(Eigen::MatrixXd::Zero(n, n)) {}

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) : m_(m) {
    if (m.rows() != m.cols()) throw PreconditionError("symmetric matrix must be square");
    if (!m.allFinite()) throw PreconditionError("symmetric matrix has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
                throw PreconditionError("matrix is not symmetric");
            m_(j, i) = m_(i, j);
        }
    }
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.m_(i, i) = d[i];
    return s;
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix s(n);
    s.m_.setIdentity();
    return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
}

bool SymMatrix::is_psd(double tol) const {
    if (dim() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
    if (o.dim() != dim()) throw DimensionError("symmetric matrix dimensions differ");
    SymMatrix r(dim());
    r.m_ = m_ + o.m_;
    return r;
}

SymMatrix SymMatrix::operator*(double s) const {
    SymMatrix r(dim());
    r.m_ = m_ * s;
    return r;
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("trace_product: dimension mismatch");
    return a.matrix().cwiseProduct(b.matrix()).sum();
}

namespace {

SymMatrix congruence(const Eigen::MatrixXd& m, const SymMatrix& b) {
    Eigen::MatrixXd r = m * b.matrix() * m.transpose();
    r = 0.5 * (r + r.transpose()).eval();
    return SymMatrix(r);
}

// Factor m = u wᵀ when m has rank <= 1.
bool rank_one_factor(const Eigen::MatrixXd& m, Eigen::VectorXd& u, Eigen::VectorXd& w) {
    Eigen::Index pivot = 0;
    m.rowwise().norm().maxCoeff(&pivot);
    w = m.row(pivot).transpose();
    const double wn2 = w.squaredNorm();
    u = Eigen::VectorXd::Zero(m.rows());
    if (wn2 == 0.0) return true;
    const double tol = 1e-12 * std::max(1.0, m.norm());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        u(k) = m.row(k).dot(w) / wn2;
        if ((m.row(k).transpose() - u(k) * w).norm() > tol) return false;
    }
    return true;
}

bool columns_single_support(const Eigen::MatrixXd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        int nz = 0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) nz += m(i, j) != 0.0;
        if (nz > 1) return false;
    }
    return true;
}

void require_finite(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw PreconditionError("matrix has non-finite entries");
}

} // namespace

GammaSet GammaSet::interval(UncertaintyInterval iv) { return GammaSet(Interval1D{iv}); }

GammaSet GammaSet::box(std::vector<UncertaintyInterval> ranges) {
    if (ranges.empty()) throw PreconditionError("diagonal box needs at least one axis");
    return GammaSet(DiagonalBox{std::move(ranges)});
}

GammaSet GammaSet::hull(std::vector<SymMatrix> generators) {
    if (generators.empty()) throw PreconditionError("convex hull needs at least one generator");
    const std::size_t n = generators.front().dim();
    for (const auto& g : generators) {
        if (g.dim() != n) throw DimensionError("convex hull generators differ in dimension");
        if (!g.is_psd()) {
            std::ostringstream os;
            os << "convex hull generator is not positive semidefinite:\n" << g.matrix();
            throw PreconditionError(os.str());
        }
    }
    return GammaSet(ConvexHull{std::move(generators)});
}

GammaSet GammaSet::rank_one(Eigen::VectorXd direction, UncertaintyInterval range) {
    if (direction.size() == 0) throw PreconditionError("rank-one family needs a direction");
    if (!direction.allFinite()) throw PreconditionError("rank-one direction has non-finite entries");
    return GammaSet(RankOneFamily{std::move(direction), range});
}

GammaSet GammaSet::zero(std::size_t n) {
    if (n == 1) return interval({0.0, 0.0});
    return hull({SymMatrix(n)});
}

std::size_t GammaSet::dim() const noexcept {
    struct {
        std::size_t operator()(const Interval1D&) const { return 1; }
        std::size_t operator()(const DiagonalBox& b) const { return b.ranges.size(); }
        std::size_t operator()(const ConvexHull& h) const { return h.generators.front().dim(); }
        std::size_t operator()(const RankOneFamily& r) const { return static_cast<std::size_t>(r.direction.size()); }
    } visitor;
    return std::visit(visitor, v_);
}

double GammaSet::max_axis_variance() const {
    struct {
        double operator()(const Interval1D& i) const { return i.range.high(); }
        double operator()(const DiagonalBox& b) const {
            double s = 0.0;
            for (const auto& r : b.ranges) s = std::max(s, r.high());
            return s;
        }
        double operator()(const ConvexHull& h) const {
            double s = 0.0;
            for (const auto& g : h.generators) s = std::max(s, g.matrix().diagonal().maxCoeff());
            return s;
        }
        double operator()(const RankOneFamily& r) const {
            return r.range.high() * r.direction.cwiseAbs2().maxCoeff();
        }
    } visitor;
    return std::visit(visitor, v_);
}

double gbar(const UncertaintyInterval& iv, double x) noexcept {
    return x >= 0.0 ? 0.5 * iv.high() * x : 0.5 * iv.low() * x;
}

double g_function(const GammaSet& gamma, const SymMatrix& a) {
    if (a.dim() != gamma.dim()) throw DimensionError("g_function: matrix and uncertainty set dimensions differ");
    struct {
        const SymMatrix& a;
        double operator()(const Interval1D& i) const { return gbar(i.range, a(0, 0)); }
        double operator()(const DiagonalBox& b) const {
            double s = 0.0;
            for (std::size_t i = 0; i < b.ranges.size(); ++i) s += gbar(b.ranges[i], a(i, i));
            return s;
        }
        double operator()(const ConvexHull& h) const {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& g : h.generators) best = std::max(best, trace_product(a, g));
            return 0.5 * best;
        }
        double operator()(const RankOneFamily& r) const {
            return gbar(r.range, r.direction.dot(a.matrix() * r.direction));
        }
    } visitor{a};
    return std::visit(visitor, gamma.variant());
}

std::vector<SymMatrix> box_vertices(const DiagonalBox& box) {
    const std::size_t n = box.ranges.size();
    if (n > kMaxBoxVertexDim)
        throw PreconditionError("box vertex enumeration is limited to 12 dimensions");
    std::vector<SymMatrix> out;
    out.reserve(std::size_t{1} << n);
    std::vector<double> d(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i)
            d[i] = (mask >> i) & 1U ? box.ranges[i].high() : box.ranges[i].low();
        out.push_back(SymMatrix::diagonal(d));
    }
    return out;
}

GammaSet image_gamma(const Eigen::MatrixXd& m, const GammaSet& gamma) {
    if (static_cast<std::size_t>(m.cols()) != gamma.dim())
        throw DimensionError("image_gamma: matrix column count differs from set dimension");
    if (m.rows() == 0) throw DimensionError("image_gamma: matrix has no rows");
    require_finite(m);
    const auto rows = static_cast<std::size_t>(m.rows());

    if (const auto* iv = std::get_if<Interval1D>(&gamma.variant())) {
        const Eigen::VectorXd c = m.col(0);
        if (rows == 1) return GammaSet::interval(iv->range.scaled(c(0) * c(0)));
        if (c.isZero(0.0)) return GammaSet::zero(rows);
        return GammaSet::rank_one(c, iv->range);
    }

    if (const auto* box = std::get_if<DiagonalBox>(&gamma.variant())) {
        if (rows == 1 || columns_single_support(m)) {
            std::vector<UncertaintyInterval> ranges;
            for (std::size_t k = 0; k < rows; ++k) {
                double lo = 0.0, hi = 0.0;
                for (std::size_t i = 0; i < box->ranges.size(); ++i) {
                    const double a2 = m(k, i) * m(k, i);
                    lo += a2 * box->ranges[i].low();
                    hi += a2 * box->ranges[i].high();
                }
                ranges.emplace_back(lo, hi);
            }
            if (rows == 1) return GammaSet::interval(ranges.front());
            return GammaSet::box(std::move(ranges));
        }
        Eigen::VectorXd u, w;
        if (rank_one_factor(m, u, w)) {
            double lo = 0.0, hi = 0.0;
            for (std::size_t i = 0; i < box->ranges.size(); ++i) {
                lo += w(i) * w(i) * box->ranges[i].low();
                hi += w(i) * w(i) * box->ranges[i].high();
            }
            return GammaSet::rank_one(u, {lo, hi});
        }
        std::vector<SymMatrix> gens;
        for (const auto& v : box_vertices(*box)) gens.push_back(congruence(m, v));
        return GammaSet::hull(std::move(gens));
    }

    if (const auto* hull = std::get_if<ConvexHull>(&gamma.variant())) {
        std::vector<SymMatrix> gens;
        gens.reserve(hull->generators.size());
        for (const auto& g : hull->generators) gens.push_back(congruence(m, g));
        if (rows == 1) {
            double lo = gens.front()(0, 0), hi = lo;
            for (const auto& g : gens) {
                lo = std::min(lo, g(0, 0));
                hi = std::max(hi, g(0, 0));
            }
            return GammaSet::interval({std::max(lo, 0.0), std::max(hi, 0.0)});
        }
        return GammaSet::hull(std::move(gens));
    }

    const auto& r = gamma.as<RankOneFamily>();
    const Eigen::VectorXd v = m * r.direction;
    if (rows == 1) return GammaSet::interval(r.range.scaled(v(0) * v(0)));
    if (v.isZero(0.0)) return GammaSet::zero(rows);
    return GammaSet::rank_one(v, r.range);
}

GammaSet rank_one_gamma(const Eigen::VectorXd& u, const Eigen::VectorXd& w, const UncertaintyInterval& iv) {
    if (u.size() == 0 || w.size() == 0) throw DimensionError("rank_one_gamma: empty vector");
    const double w2 = w.squaredNorm();
    if (u.isZero(0.0) || w2 == 0.0) return GammaSet::zero(static_cast<std::size_t>(u.size()));
    return GammaSet::rank_one(u, iv.scaled(w2));
}

bool is_diagonal_image(const Eigen::Matrix2d& a, const GammaSet& box) {
    const auto* b = std::get_if<DiagonalBox>(&box.variant());
    if (b == nullptr || b->ranges.size() != 2)
        throw PreconditionError("is_diagonal_image: expects a two-dimensional diagonal box");
    for (const auto& r : b->ranges)
        if (!(r.width() > 0.0)) throw PreconditionError("is_diagonal_image: box widths must be positive");
    return std::abs(a(0, 0) * a(1, 0)) <= kAlgebraicZero && std::abs(a(0, 1) * a(1, 1)) <= kAlgebraicZero;
}

std::vector<ScalingViolation> check_scaling_constraint(std::span<const UncertaintyInterval> intervals) {
    if (intervals.empty()) throw PreconditionError("check_scaling_constraint: empty interval list");
    std::vector<ScalingViolation> out;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& a = intervals[i];
        if (!(0.0 < a.low() && a.low() < a.high())) continue;
        for (std::size_t j = 0; j < intervals.size(); ++j) {
            if (j == i) continue;
            const auto& b = intervals[j];
            const double alpha = b.low() / a.low();
            if (!(alpha > 0.0)) continue;
            if (std::abs(alpha * a.high() - b.high()) <= 1e-12 * std::max(1.0, b.high()))
                out.push_back({i, j, alpha});
        }
    }
    return out;
}

std::vector<SymMatrix> probe_matrices(std::size_t n) {
    std::mt19937_64 rng(0x6e5eedULL + n);
    std::normal_distribution<double> normal;
    std::vector<SymMatrix> out;
    out.reserve(64 + n * (n + 1) / 2);
    for (int k = 0; k < 64; ++k) {
        Eigen::MatrixXd m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = normal(rng);
        m /= m.norm();
        out.emplace_back(m);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            SymMatrix e(n);
            e.set(i, j, 1.0);
            out.push_back(e);
        }
    }
    return out;
}

bool equivalent(const GammaSet& a, const GammaSet& b, double tol) {
    if (a.dim() != b.dim()) return false;
    for (const auto& p : probe_matrices(a.dim()))
        if (std::abs(g_function(a, p) - g_function(b, p)) > tol) return false;
    return true;
}

} // namespace gexpect
