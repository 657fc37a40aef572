#include "gexpect/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gexpect/catalog.hpp"
#include "gexpect/expectation.hpp"

namespace gexpect {

namespace {

constexpr std::string_view kClassicalZero = "classical-zero";

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

class Recorder {
public:
    Recorder(std::string name, const ScenarioConfig& cfg)
        : cfg_(cfg), start_(std::chrono::steady_clock::now()) {
        out_.name = std::move(name);
    }

    Quantity add(std::string label, double value, double error = 0.0) {
        out_.quantities.push_back({std::move(label), value, error});
        return out_.quantities.back();
    }
    Quantity add(std::string label, const ExpectationResult& r) { return add(std::move(label), r.value, r.error_estimate); }

    /// |a - b| <= tol
    void close(std::string description, const std::string& label, double a, double b, double tol) {
        const double margin = tol - std::abs(a - b);
        push(std::move(description), label, margin >= 0.0, margin, "|lhs - rhs| <= " + fmt(tol), {});
    }

    /// value > factor * error
    void positive(std::string description, const Quantity& q, double error) {
        const double margin = q.value - cfg_.positivity_factor * error;
        push(std::move(description), q.label, margin > 0.0, margin, "value > " + fmt(cfg_.positivity_factor) + " * error", {});
    }

    /// |value| <= tol, the classical stand-in for a strict positivity claim.
    void classical_zero(std::string description, const Quantity& q) {
        const double margin = cfg_.tolerance - std::abs(q.value);
        push(std::move(description), q.label, margin >= 0.0, margin, "|value| <= " + fmt(cfg_.tolerance),
             std::string(kClassicalZero));
    }

    /// |value| <= tol
    void zero(std::string description, const Quantity& q) {
        const double margin = cfg_.tolerance - std::abs(q.value);
        push(std::move(description), q.label, margin >= 0.0, margin, "|value| <= " + fmt(cfg_.tolerance), {});
    }

    /// |a - b| > factor * error
    void differ(std::string description, const std::string& label, double a, double b, double error) {
        const double margin = std::abs(a - b) - cfg_.positivity_factor * error;
        push(std::move(description), label, margin > 0.0, margin, "|lhs - rhs| > " + fmt(cfg_.positivity_factor) + " * error",
             {});
    }

    void predicate(std::string description, const std::string& label, bool holds, std::string tag = {}) {
        push(std::move(description), label, holds, holds ? 0.0 : -1.0, "predicate", std::move(tag));
    }

    ScenarioOutcome finish() {
        out_.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        return std::move(out_);
    }

private:
    void push(std::string description, const std::string& label, bool pass, double margin, std::string rule,
              std::string tag) {
        out_.assertions.push_back({std::move(description), label, pass, margin, std::move(rule), std::move(tag)});
    }

    const ScenarioConfig& cfg_;
    ScenarioOutcome out_;
    std::chrono::steady_clock::time_point start_;
};

void require_nondegenerate(const UncertaintyInterval& iv, const char* who) {
    if (!(iv.high() > 0.0))
        throw PreconditionError(std::string(who) + ": degenerate interval, the upper variance must be positive");
}

bool uncertain(const UncertaintyInterval& iv) { return iv.low() < iv.high(); }

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

// Prefixes labels so several runner cases can share one outcome.
void absorb(ScenarioOutcome& into, ScenarioOutcome part, const std::string& prefix) {
    for (auto& q : part.quantities) {
        q.label = prefix + q.label;
        into.quantities.push_back(std::move(q));
    }
    for (auto& a : part.assertions) {
        a.quantity = prefix + a.quantity;
        into.assertions.push_back(std::move(a));
    }
    into.runtime_ms += part.runtime_ms;
}

std::string prefixed(const std::string& tag, const std::string& label) { return tag.empty() ? label : tag + ": " + label; }

} // namespace

bool ScenarioOutcome::passed() const noexcept {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

const Quantity& ScenarioOutcome::quantity(std::string_view label) const {
    for (const auto& q : quantities)
        if (q.label == label) return q;
    throw PreconditionError("scenario " + name + " has no quantity '" + std::string(label) + "'");
}

ScenarioOutcome run_asymmetric_independence(const UncertaintyInterval& iv1, const UncertaintyInterval& iv2,
                                            const ScenarioConfig& cfg) {
    require_nondegenerate(iv1, "asymmetric-independence");
    const bool classical = !uncertain(iv2);
    if (classical && cfg.classical == ClassicalPolicy::reject)
        throw PreconditionError("asymmetric-independence: the later variable needs variance uncertainty (low < high)");
    Recorder rec("asymmetric-independence", cfg);
    const std::vector<UncertaintyInterval> ivs{iv1, iv2};
    const auto a = expect_sequential(ivs, {}, catalog::x2_y(), cfg.grid);
    const auto b = expect_sequential(ivs, {}, catalog::x_y2(), cfg.grid);
    const Quantity qa = rec.add("E[Y2*Y1^2]", a);
    const Quantity qb = rec.add("E[Y1*Y2^2]", b);
    rec.zero("later variable enters linearly: E[Y2*Y1^2] = 0", qa);
    const double closed = iv2.width() * std::sqrt(iv1.high()) / std::sqrt(2.0 * std::numbers::pi);
    rec.add("(high2-low2)*sigma1/sqrt(2pi)", closed);
    rec.close("E[Y1*Y2^2] matches the closed form of the inner step", qb.label, qb.value, closed,
              cfg.tolerance * std::max(1.0, std::abs(closed)));
    if (classical)
        rec.classical_zero("classical later variable: E[Y1*Y2^2] = 0", qb);
    else
        rec.positive("E[Y1*Y2^2] > 0: Y1 is not independent from Y2", qb, b.error_estimate);
    return rec.finish();
}

ScenarioOutcome run_linear_combination(const UncertaintyInterval& iv, const ScenarioConfig& cfg) {
    require_nondegenerate(iv, "linear-combination");
    Recorder rec("linear-combination", cfg);
    const std::vector<UncertaintyInterval> ivs{iv, iv};
    const auto uv = expect_sequential(ivs, {}, catalog::u_v2(), cfg.grid);
    const auto vu = expect_sequential(ivs, {}, catalog::v_u2(), cfg.grid);
    const Quantity quv = rec.add("E[U*V^2]", uv);
    const Quantity qvu = rec.add("E[V*U^2]", vu);
    rec.close("E[U*V^2] = E[V*U^2]", quv.label, uv.value, vu.value, cfg.pair_tolerance);
    const double combined = uv.error_estimate + vu.error_estimate;
    if (uncertain(iv)) {
        rec.positive("E[U*V^2] > 0: U is not independent from V", quv, combined);
        rec.positive("E[V*U^2] > 0: V is not independent from U", qvu, combined);
    } else {
        rec.classical_zero("classical: U, V independent and E[U*V^2] = 0", quv);
        rec.classical_zero("classical: U, V independent and E[V*U^2] = 0", qvu);
    }

    const Eigen::MatrixXd to_uv = mat({{1, 1}, {1, -1}});
    const Eigen::MatrixXd to_vu = mat({{1, -1}, {1, 1}});
    for (const auto& phi : catalog::bivariate()) {
        const auto a = expect_sequential(ivs, {}, phi.compose_linear(to_uv), cfg.grid);
        const auto b = expect_sequential(ivs, {}, phi.compose_linear(to_vu), cfg.grid);
        const std::string label = "E[" + phi.name() + "(U,V)]";
        rec.add(label, a);
        rec.add("E[" + phi.name() + "(V,U)]", b);
        rec.close("swap identity E[phi(U,V)] = E[phi(V,U)] for " + phi.name(), label, a.value, b.value,
                  cfg.pair_tolerance * std::max(1.0, std::abs(b.value)));
    }
    return rec.finish();
}

ScenarioOutcome run_linear_image(const UncertaintyInterval& iv, const Eigen::MatrixXd& a, const Eigen::VectorXd& v,
                                 const ScenarioConfig& cfg, const std::string& tag) {
    const auto n = static_cast<std::size_t>(a.cols());
    if (n == 0 || n > 3) throw DimensionError("linear-image: A must have between one and three columns");
    if (v.size() != a.rows()) throw DimensionError("linear-image: v must have one entry per row of A");
    Recorder rec("linear-image", cfg);
    const std::vector<UncertaintyInterval> ivs(n, iv);
    const Eigen::VectorXd w = a.transpose() * v;
    const double scale = w.squaredNorm();
    const UncertaintyInterval scaled = iv.scaled(scale);
    rec.add(prefixed(tag, "|v^T A|^2"), scale);
    const Eigen::MatrixXd row = w.transpose();
    for (const auto& phi : catalog::univariate()) {
        const auto nested = expect_sequential(ivs, {}, phi.compose_linear(row), cfg.grid);
        const auto direct = expect_gnormal(GammaSet::interval(scaled), phi, 1.0, {}, cfg.grid);
        const std::string label = prefixed(tag, "E[" + phi.name() + "(<v,AY>)]");
        rec.add(label, nested);
        rec.add(prefixed(tag, "E[" + phi.name() + "(s)], s on scaled interval"), direct);
        rec.close("<v,AY> is G-normal on the scaled interval for " + phi.name(), label, nested.value, direct.value,
                  cfg.tolerance * std::max(1.0, std::abs(direct.value)));
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double top = s.size() ? s(0) : 0.0;
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > 1e-12 * std::max(1.0, top)) ++rank;
    if (rank <= 1 && a.rows() == 2) {
        // A = u wᵀ, so AY = u (wᵀY) lives on the rank-one family.
        const Eigen::VectorXd u = rank ? Eigen::VectorXd(svd.matrixU().col(0) * top) : Eigen::VectorXd::Zero(2);
        const Eigen::VectorXd wr = rank ? Eigen::VectorXd(svd.matrixV().col(0)) : Eigen::VectorXd::Zero(a.cols());
        const GammaSet family = rank_one_gamma(u, wr, iv);
        std::vector<TestFunction> fns{catalog::coordinate_power(2, 1, 2), catalog::x_y2(), catalog::xy(), catalog::sum_squares()};
        for (const auto& phi : fns) {
            const auto nested = expect_sequential(ivs, {}, phi.compose_linear(a), cfg.grid);
            const auto direct = expect_gnormal(family, phi, 1.0, {}, cfg.grid);
            const std::string label = prefixed(tag, "E[" + phi.name() + "(AY)]");
            rec.add(label, nested);
            rec.add(prefixed(tag, "E[" + phi.name() + "(X)], X ~ N(0, rank-one family)"), direct);
            rec.close("rank-one AY is G-normal on {u r u^T} for " + phi.name(), label, nested.value, direct.value,
                      cfg.tolerance * std::max(1.0, std::abs(direct.value)));
        }
    }
    return rec.finish();
}

ScenarioOutcome run_symmetry_identity(const UncertaintyInterval& iv, double alpha, const ScenarioConfig& cfg) {
    require_nondegenerate(iv, "symmetry-identity");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("symmetry-identity: alpha must be positive");
    Recorder rec("symmetry-identity", cfg);
    const UncertaintyInterval iv2 = iv.scaled(alpha);
    const GammaSet box = GammaSet::box({iv, iv2});
    const double origin[2] = {0.0, 0.0};
    const auto p = expect_gnormal(box, catalog::x2_y(), 1.0, origin, cfg.grid);
    const auto q = expect_gnormal(box, catalog::x_y2(), 1.0, origin, cfg.grid);
    const Quantity qp = rec.add("p = E[W2*W1^2]", p);
    const Quantity qq = rec.add("q = E[W1*W2^2]", q);
    const double ra = std::sqrt(alpha);
    rec.close("sqrt(alpha) * p = q", qq.label, ra * p.value, q.value, cfg.pair_tolerance);

    const std::vector<UncertaintyInterval> ivs{iv, iv2};
    const auto ps = expect_sequential(ivs, {}, catalog::x2_y(), cfg.grid);
    const auto qs = expect_sequential(ivs, {}, catalog::x_y2(), cfg.grid);
    const Quantity qps = rec.add("sequential p' = E[Y2*Y1^2]", ps);
    const Quantity qqs = rec.add("sequential q' = E[Y1*Y2^2]", qs);
    if (uncertain(iv)) {
        rec.zero("sequential p' = 0", qps);
        rec.positive("sequential q' > 0", qqs, qs.error_estimate);
        rec.differ("sequential pair breaks sqrt(alpha) p' = q', so its law is not N(0, box)", qqs.label, ra * ps.value,
                   qs.value, ra * ps.error_estimate + qs.error_estimate);
    } else {
        rec.classical_zero("classical: p = 0", qp);
        rec.classical_zero("classical: q = 0", qq);
        rec.classical_zero("classical: p' = 0", qps);
        rec.classical_zero("classical: q' = 0", qqs);
    }
    return rec.finish();
}

ScenarioOutcome run_diag_not_indep(const UncertaintyInterval& iv, const ScenarioConfig& cfg) {
    require_nondegenerate(iv, "diag-not-indep");
    Recorder rec("diag-not-indep", cfg);
    const GammaSet box = GammaSet::box({iv, iv});
    const double origin[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < 2; ++i) {
        const TestFunction sq = catalog::coordinate_power(2, i, 2);
        const auto upper = expect_gnormal(box, sq, 1.0, origin, cfg.grid);
        const auto lower = expect_gnormal(box, sq.negated(), 1.0, origin, cfg.grid);
        const std::string idx = std::to_string(i + 1);
        const Quantity qu = rec.add("E[X" + idx + "^2]", upper);
        const Quantity ql = rec.add("-E[-X" + idx + "^2]", -lower.value, lower.error_estimate);
        rec.close("upper marginal variance E[X" + idx + "^2] = high", qu.label, qu.value, iv.high(),
                  cfg.tolerance * std::max(1.0, iv.high()));
        rec.close("lower marginal variance -E[-X" + idx + "^2] = low", ql.label, ql.value, iv.low(),
                  cfg.tolerance * std::max(1.0, iv.low()));
    }

    const auto c = expect_gnormal(box, catalog::x_y2(), 1.0, origin, cfg.grid);
    const auto d = expect_gnormal(box, catalog::x2_y(), 1.0, origin, cfg.grid);
    const Quantity qc = rec.add("c = E[X1*X2^2]", c);
    const Quantity qd = rec.add("d = E[X2*X1^2]", d);
    rec.close("c = d (coordinate swap symmetry of the box)", qc.label, c.value, d.value, cfg.pair_tolerance);

    const std::vector<UncertaintyInterval> ivs{iv, iv};
    const auto sa = expect_sequential(ivs, {}, catalog::x2_y(), cfg.grid);
    const auto sb = expect_sequential(ivs, {}, catalog::x_y2(), cfg.grid);
    const Quantity qsa = rec.add("sequential E[Y2*Y1^2]", sa);
    const Quantity qsb = rec.add("sequential E[Y1*Y2^2]", sb);

    if (uncertain(iv)) {
        // Either independence order forces one of c, d to vanish.
        const double f = cfg.positivity_factor;
        const bool check1 = std::abs(c.value) > f * c.error_estimate && std::abs(d.value) > f * d.error_estimate;
        const bool check2 = std::abs(c.value - d.value) <= cfg.pair_tolerance &&
                            std::abs(sb.value - sa.value) > f * (sa.error_estimate + sb.error_estimate);
        rec.add("witness: c and d both nonzero", check1 ? 1.0 : 0.0);
        rec.add("witness: swap-symmetric pair vs asymmetric sequential pair", check2 ? 1.0 : 0.0);
        rec.predicate("X1 and X2 are not independent in either order (check 1 or check 2)", qc.label, check1 || check2);
    } else {
        rec.classical_zero("classical: c = 0", qc);
        rec.classical_zero("classical: d = 0", qd);
        rec.classical_zero("classical: sequential E[Y2*Y1^2] = 0", qsa);
        rec.classical_zero("classical: sequential E[Y1*Y2^2] = 0", qsb);
    }
    return rec.finish();
}

ScenarioOutcome run_quadratic_form(const std::vector<UncertaintyInterval>& intervals, const std::vector<std::size_t>& pi,
                                   const SymMatrix& a, const ScenarioConfig& cfg, const std::string& tag) {
    const std::size_t n = intervals.size();
    if (n == 0 || n > 3) throw DimensionError("quadratic-form: between one and three variables are supported");
    if (a.dim() != n) throw DimensionError("quadratic-form: matrix dimension differs from the number of variables");
    Recorder rec("quadratic-form", cfg);
    const auto value = expect_sequential(intervals, pi, catalog::quadratic_form(a.matrix()), cfg.grid);
    const double closed = 2.0 * g_function(GammaSet::box(intervals), a);
    const std::string label = prefixed(tag, "E[<AX,X>]");
    rec.add(label, value);
    rec.add(prefixed(tag, "sum(high_i a_ii^+ - low_i a_ii^-)"), closed);
    rec.close("E[<AX,X>] = 2 G(A) on the box", label, value.value, closed, cfg.tolerance * std::max(1.0, std::abs(closed)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.5;
            e(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 0.5;
            const TestFunction prod = catalog::quadratic_form(e);
            const auto up = expect_sequential(intervals, pi, prod, cfg.grid);
            const auto lo = expect_sequential(intervals, pi, prod.negated(), cfg.grid);
            const std::string pair = "X" + std::to_string(i + 1) + "*X" + std::to_string(j + 1);
            const Quantity qu = rec.add(prefixed(tag, "E[" + pair + "]"), up);
            const Quantity ql = rec.add(prefixed(tag, "-E[-" + pair + "]"), -lo.value, lo.error_estimate);
            rec.zero("cross term vanishes: E[" + pair + "] = 0", qu);
            rec.zero("cross term vanishes: -E[-" + pair + "] = 0", ql);
        }
    }
    return rec.finish();
}

ScenarioOutcome run_reverse_independence_witness(const std::vector<UncertaintyInterval>& intervals,
                                                 const std::vector<std::size_t>& pi, std::size_t i, std::size_t j,
                                                 const ScenarioConfig& cfg) {
    const std::size_t n = intervals.size();
    if (n < 2) throw PreconditionError("reverse-independence: at least two variables required");
    std::vector<std::size_t> order = pi;
    if (order.empty())
        for (std::size_t k = 0; k < n; ++k) order.push_back(k);
    if (order.size() != n) throw DimensionError("reverse-independence: order must list every variable");
    if (!(i < j) || j >= n) throw PreconditionError("reverse-independence: positions must satisfy i < j < n");
    const UncertaintyInterval& early = intervals[order[i]];
    const UncertaintyInterval& late = intervals[order[j]];
    const bool cond_a = uncertain(early) && late.high() > 0.0;
    const bool cond_b = uncertain(late) && early.high() > 0.0;
    const bool classical = !cond_a && !cond_b && early.high() > 0.0 && late.high() > 0.0;
    if (!cond_a && !cond_b && !(classical && cfg.classical == ClassicalPolicy::classical_zero)) {
        throw PreconditionError(
            "reverse-independence: neither condition holds (needs an uncertain interval at one position and a positive "
            "upper variance at the other)");
    }
    Recorder rec("reverse-independence", cfg);
    const std::string xi = "X" + std::to_string(order[i] + 1);
    const std::string xj = "X" + std::to_string(order[j] + 1);
    // The pair (early, late) is itself sequential: late is independent from early.
    const std::vector<UncertaintyInterval> pair{early, late};
    const std::vector<std::size_t> actual{0, 1};
    const std::vector<std::size_t> reversed{1, 0};
    const bool use_b = cond_b || classical;
    const TestFunction witness = use_b ? catalog::x_y2() : catalog::x2_y();
    const std::string fname = use_b ? xi + "*" + xj + "^2" : xi + "^2*" + xj;
    const auto truth = expect_sequential(pair, actual, witness, cfg.grid);
    const auto hyp = expect_sequential(pair, reversed, witness, cfg.grid);
    const Quantity qt = rec.add("true E[" + fname + "]", truth);
    const Quantity qh = rec.add("E[" + fname + "] if " + xi + " were independent from " + xj, hyp);
    rec.add("condition (a)", cond_a ? 1.0 : 0.0);
    rec.add("condition (b)", cond_b ? 1.0 : 0.0);
    if (classical) {
        rec.classical_zero("classical: true value 0", qt);
        rec.classical_zero("classical: reversed value 0", qh);
        return rec.finish();
    }
    if (use_b) {
        rec.positive("true value > 0", qt, truth.error_estimate);
        rec.zero("reversed order forces 0", qh);
    } else {
        rec.zero("true value is 0 (later variable linear)", qt);
        rec.positive("reversed order forces a positive value", qh, hyp.error_estimate);
    }
    rec.differ(xi + " is not independent from " + xj + ": the two values differ", qt.label, truth.value, hyp.value,
               truth.error_estimate + hyp.error_estimate);
    return rec.finish();
}

std::vector<NamedMatrix> invertible_scan_catalog() {
    std::vector<NamedMatrix> out;
    out.push_back({"identity", Eigen::Matrix2d::Identity()});
    out.push_back({"antidiagonal", (Eigen::Matrix2d() << 0, 1, 1, 0).finished()});
    out.push_back({"diag(2,3)", (Eigen::Matrix2d() << 2, 0, 0, 3).finished()});
    for (int deg = 15; deg < 180; deg += 15) {
        const double r = deg * std::numbers::pi / 180.0;
        // Exact zeros at 90 degrees keep the predicate's algebraic test meaningful.
        const double c = deg == 90 ? 0.0 : std::cos(r);
        const double s = std::sin(r);
        out.push_back({"rotation " + std::to_string(deg) + "deg", (Eigen::Matrix2d() << c, -s, s, c).finished()});
    }
    out.push_back({"shear x", (Eigen::Matrix2d() << 1, 1, 0, 1).finished()});
    out.push_back({"shear y", (Eigen::Matrix2d() << 1, 0, 1, 1).finished()});
    out.push_back({"shear x 0.5", (Eigen::Matrix2d() << 1, 0.5, 0, 1).finished()});
    return out;
}

ScenarioOutcome run_invertible_scan(const UncertaintyInterval& iv, const std::vector<NamedMatrix>& sample,
                                    const ScenarioConfig& cfg) {
    require_nondegenerate(iv, "invertible-scan");
    Recorder rec("invertible-scan", cfg);
    const bool classical = !uncertain(iv);
    const GammaSet box = GammaSet::box({iv, iv});
    const double r[2] = {iv.low(), iv.high()};
    for (const auto& [name, a] : sample) {
        const double det = a.determinant();
        if (std::abs(det) <= 1e-12 * std::max(1.0, a.squaredNorm())) {
            rec.add(name + ": singular, skipped", det);
            continue;
        }
        // Off-diagonal entry of A diag(r1, r2) Aᵀ at every vertex; keep the largest.
        double off = 0.0;
        double at[2] = {r[0], r[0]};
        for (double r1 : r) {
            for (double r2 : r) {
                const double v = a(0, 0) * a(1, 0) * r1 + a(0, 1) * a(1, 1) * r2;
                if (std::abs(v) > std::abs(off)) {
                    off = v;
                    at[0] = r1;
                    at[1] = r2;
                }
            }
        }
        if (classical) {
            const Quantity q = rec.add(name + ": off-diagonal of A Gamma A^T", off);
            const bool orthogonal = ((a * a.transpose()) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-12;
            if (orthogonal) rec.classical_zero(name + ": orthogonal image of a classical normal stays diagonal", q);
            continue;
        }
        if (!is_diagonal_image(a, box)) {
            const Quantity q = rec.add(name + ": off-diagonal at vertex (" + fmt(at[0]) + "," + fmt(at[1]) + ")", off);
            rec.predicate(name + ": A Gamma A^T holds a non-diagonal matrix, coordinates not independent", q.label,
                          std::abs(off) > kAlgebraicZero);
            continue;
        }
        const double s1 = a(0, 0) * a(0, 0) + a(0, 1) * a(0, 1);
        const double s2 = a(1, 0) * a(1, 0) + a(1, 1) * a(1, 1);
        const std::vector<UncertaintyInterval> marginals{iv.scaled(s1), iv.scaled(s2)};
        const Quantity q1 = rec.add(name + ": W1 high variance", marginals[0].high());
        rec.add(name + ": W1 low variance", marginals[0].low());
        rec.add(name + ": W2 high variance", marginals[1].high());
        rec.add(name + ": W2 low variance", marginals[1].low());
        const auto violations = check_scaling_constraint(marginals);
        rec.add(name + ": scaling alpha", violations.empty() ? 0.0 : violations.front().alpha);
        rec.predicate(name + ": marginals are scalings of one uncertain interval, so independence is impossible", q1.label,
                      !violations.empty());
    }
    return rec.finish();
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"asymmetric-independence", "linear-combination", "linear-image",
                                                "symmetry-identity",       "diag-not-indep",     "quadratic-form",
                                                "reverse-independence",    "invertible-scan"};
    return names;
}

bool is_scenario(std::string_view name) {
    const auto& n = scenario_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

ScenarioOutcome run_scenario(std::string_view name, const ScenarioParams& params) {
    if (!(params.horizon > 0.0)) throw PreconditionError("horizon t must be positive");
    const UncertaintyInterval iv = UncertaintyInterval(params.sigma_low_sq, params.sigma_high_sq).scaled(params.horizon);
    ScenarioConfig cfg = params.config;
    cfg.classical = ClassicalPolicy::classical_zero;

    if (name == "asymmetric-independence") return run_asymmetric_independence(iv, iv, cfg);
    if (name == "linear-combination") return run_linear_combination(iv, cfg);
    if (name == "linear-image") {
        ScenarioOutcome out{"linear-image", {}, {}, 0.0};
        Eigen::VectorXd one(1);
        one << 1.0;
        Eigen::VectorXd both(2);
        both << 1.0, 1.0;
        absorb(out, run_linear_image(iv, mat({{3, 4}}), one, cfg), "A=(3,4) v=1: ");
        absorb(out, run_linear_image(iv, mat({{1, 0}}), one, cfg), "A=(1,0) v=1: ");
        absorb(out, run_linear_image(iv, mat({{1, 0}, {2, 0}}), both, cfg), "A=(1,2)(1,0)^T v=(1,1): ");
        return out;
    }
    if (name == "symmetry-identity") {
        ScenarioOutcome out{"symmetry-identity", {}, {}, 0.0};
        absorb(out, run_symmetry_identity(iv, 1.0, cfg), "alpha=1: ");
        if (params.alpha != 1.0) absorb(out, run_symmetry_identity(iv, params.alpha, cfg), "alpha=" + fmt(params.alpha) + ": ");
        return out;
    }
    if (name == "diag-not-indep") return run_diag_not_indep(iv, cfg);
    if (name == "quadratic-form") {
        ScenarioOutcome out{"quadratic-form", {}, {}, 0.0};
        const std::vector<UncertaintyInterval> same{iv, iv};
        const std::vector<UncertaintyInterval> mixed{iv, iv.scaled(2.0)};
        const std::vector<std::size_t> id{0, 1}, rev{1, 0};
        absorb(out, run_quadratic_form(same, id, SymMatrix(mat({{1, 0}, {0, -1}})), cfg), "A=diag(1,-1): ");
        absorb(out, run_quadratic_form(same, rev, SymMatrix(mat({{0, 5}, {5, 0}})), cfg), "A=[[0,5],[5,0]]: ");
        absorb(out, run_quadratic_form(mixed, id, SymMatrix::identity(2), cfg), "A=I, mixed intervals: ");
        absorb(out, run_quadratic_form(mixed, rev, SymMatrix(mat({{2, 1}, {1, -3}})), cfg), "A=[[2,1],[1,-3]]: ");
        absorb(out, run_quadratic_form(same, id, SymMatrix(mat({{-1, 3}, {3, 2}})), cfg), "A=[[-1,3],[3,2]]: ");
        return out;
    }
    if (name == "reverse-independence") {
        ScenarioOutcome out{"reverse-independence", {}, {}, 0.0};
        absorb(out, run_reverse_independence_witness({iv, iv}, {0, 1}, 0, 1, cfg), "equal intervals: ");
        absorb(out, run_reverse_independence_witness({iv, iv.scaled(2.0)}, {0, 1}, 0, 1, cfg), "second interval doubled: ");
        return out;
    }
    if (name == "invertible-scan") return run_invertible_scan(iv, invertible_scan_catalog(), cfg);

    std::ostringstream os;
    os << "unknown scenario '" << name << "'; valid names:";
    for (const auto& n : scenario_names()) os << ' ' << n;
    throw PreconditionError(os.str());
}

} // namespace gexpect
