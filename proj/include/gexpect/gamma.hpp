#pragma once

// Uncertainty sets Γ of covariance matrices and the sublinear function
//   G(A) = 1/2 sup_{B in Γ} tr[AB]
// they generate, together with the linear maps Γ -> MΓMᵀ.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gexpect/error.hpp"

namespace gexpect {

inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kAlgebraicZero = 1e-12;
inline constexpr double kSetEqualityTolerance = 1e-9;
inline constexpr std::size_t kMaxBoxVertexDim = 12;

/// Variance range [σ̲², σ̄²] of a scalar G-normal law.
class UncertaintyInterval {
public:
    UncertaintyInterval(double low_sq, double high_sq);

    double low() const noexcept { return low_; }
    double high() const noexcept { return high_; }
    double width() const noexcept { return high_ - low_; }
    /// No variance uncertainty: the law is classical N(0, σ²).
    bool classical() const noexcept { return low_ == high_; }

    UncertaintyInterval scaled(double factor) const;

    friend bool operator==(const UncertaintyInterval&, const UncertaintyInterval&) = default;

private:
    double low_;
    double high_;
};

/// Symmetric real matrix, stored with the lower triangle mirrored from the upper.
class SymMatrix {
public:
    explicit SymMatrix(std::size_t n);
    /// Throws PreconditionError if `m` is not square or not symmetric to 1e-12 relative.
    explicit SymMatrix(const Eigen::MatrixXd& m);

    static SymMatrix diagonal(std::span<const double> d);
    static SymMatrix identity(std::size_t n);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v);
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    bool is_psd(double tol = kPsdTolerance) const;

    SymMatrix operator+(const SymMatrix& o) const;
    SymMatrix operator*(double s) const;

private:
    Eigen::MatrixXd m_;
};

/// tr[A B] for symmetric A, B of equal dimension.
double trace_product(const SymMatrix& a, const SymMatrix& b);

/// Γ as a set of variance intervals along one axis.
struct Interval1D {
    UncertaintyInterval range;
};

/// Γ = { diag(r_1..r_n) : r_i in [σ̲_i², σ̄_i²] }.
struct DiagonalBox {
    std::vector<UncertaintyInterval> ranges;
};

/// Γ = conv{B_1..B_k}, each B_i symmetric PSD.
struct ConvexHull {
    std::vector<SymMatrix> generators;
};

/// Γ = { r u uᵀ : r in range }.
struct RankOneFamily {
    Eigen::VectorXd direction;
    UncertaintyInterval range;
};

class GammaSet {
public:
    using Variant = std::variant<Interval1D, DiagonalBox, ConvexHull, RankOneFamily>;

    static GammaSet interval(UncertaintyInterval iv);
    static GammaSet box(std::vector<UncertaintyInterval> ranges);
    static GammaSet hull(std::vector<SymMatrix> generators);
    static GammaSet rank_one(Eigen::VectorXd direction, UncertaintyInterval range);
    /// The singleton {0} in S(n).
    static GammaSet zero(std::size_t n);

    std::size_t dim() const noexcept;
    const Variant& variant() const noexcept { return v_; }

    template <class T>
    bool is() const noexcept { return std::holds_alternative<T>(v_); }
    template <class T>
    const T& as() const { return std::get<T>(v_); }

    /// Largest σ̄² over coordinate axes, i.e. max_i sup_{B in Γ} B_ii.
    double max_axis_variance() const;

private:
    explicit GammaSet(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Ḡ(x) = 1/2 (σ̄² x⁺ - σ̲² x⁻).
double gbar(const UncertaintyInterval& iv, double x) noexcept;

/// G(A) = 1/2 sup_{B in Γ} tr[AB].
double g_function(const GammaSet& gamma, const SymMatrix& a);

/// { M B Mᵀ : B in Γ } in the tightest representable variant.
GammaSet image_gamma(const Eigen::MatrixXd& m, const GammaSet& gamma);

/// Γ' = { u r uᵀ : r in [‖w‖²σ̲², ‖w‖²σ̄²] }, the law of (u wᵀ) Y for sequential Y.
/// A zero `u` or `w` gives the singleton {0}.
GammaSet rank_one_gamma(const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                        const UncertaintyInterval& iv);

/// Vertices diag(r) of a diagonal box, r_i in {σ̲_i², σ̄_i²}. At most 2^12 of them.
std::vector<SymMatrix> box_vertices(const DiagonalBox& box);

/// True iff A Γ Aᵀ holds only diagonal matrices: a11 a21 = a12 a22 = 0.
/// `box` must be a two-dimensional DiagonalBox with strictly positive widths.
bool is_diagonal_image(const Eigen::Matrix2d& a, const GammaSet& box);

struct ScalingViolation {
    std::size_t i;
    std::size_t j;
    double alpha;  ///< α[σ̲_i², σ̄_i²] = [σ̲_j², σ̄_j²]
};

/// Ordered pairs (i, j), i != j, 0 < σ̲_i² < σ̄_i², whose intervals are positive
/// multiples of one another.
std::vector<ScalingViolation> check_scaling_constraint(std::span<const UncertaintyInterval> intervals);

/// Fixed probe set used to compare uncertainty sets: 64 pseudo-random unit
/// Frobenius-norm symmetric matrices followed by the canonical basis of S(n).
std::vector<SymMatrix> probe_matrices(std::size_t n);

/// Set equality decided through G on the probe set.
bool equivalent(const GammaSet& a, const GammaSet& b, double tol = kSetEqualityTolerance);

} // namespace gexpect
