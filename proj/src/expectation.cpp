#include "gexpect/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "gexpect/quadrature.hpp"

namespace gexpect {

namespace {

std::size_t spec_dim(const RandomVectorSpec::Variant& v) {
    return std::visit(
        [](const auto& s) -> std::size_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GNormal>) {
                return s.gamma.dim();
            } else if constexpr (std::is_same_v<T, Sequential>) {
                return s.intervals.size();
            } else if constexpr (std::is_same_v<T, Maximal>) {
                return s.points.empty() ? s.box.size() : static_cast<std::size_t>(s.points.front().size());
            } else {
                return static_cast<std::size_t>(s.matrix.rows());
            }
        },
        v);
}

void require_arity(const TestFunction& phi, std::size_t n, const char* who) {
    if (phi.arity() != n) {
        std::ostringstream os;
        os << who << ": test function " << phi.name() << " has arity " << phi.arity() << ", the random vector has dimension "
           << n;
        throw DimensionError(os.str());
    }
}

std::vector<std::size_t> resolve_order(std::span<const std::size_t> order, std::size_t n) {
    if (order.empty()) {
        std::vector<std::size_t> id(n);
        std::iota(id.begin(), id.end(), std::size_t{0});
        return id;
    }
    if (order.size() != n) throw DimensionError("sequential order must list every variable once");
    std::vector<std::size_t> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i)
        if (sorted[i] != i) throw PreconditionError("sequential order is not a permutation of 0..n-1");
    return {order.begin(), order.end()};
}

double int_pow(double x, int m) {
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= x;
    return r;
}

// Growth of ψ(y_1..y_{k-1}) = Ê[ψ_k(y_1..y_{k-1}, Y_k)] for Y_k with upper variance σ̄².
Growth propagate(const Growth& g, double sigma_high) {
    const double m = g.order;
    const double factor = 1.0 + int_pow(sigma_high, g.order) * std::pow(m, m);
    return {g.order, g.constant * factor};
}

template <class F>
std::vector<double> tabulate_with(std::span<const AxisGrid> axes, F&& f, std::string_view name) {
    std::size_t size = 1;
    for (const auto& a : axes) size *= a.nodes();
    std::vector<double> out(size);
    const std::size_t n = axes.size();
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    for (std::size_t a = 0; a < n; ++a) x[a] = axes[a].coord(0);
    for (std::size_t k = 0; k < size; ++k) {
        const double v = f(std::span<const double>(x));
        if (!std::isfinite(v)) throw DomainError("test function " + std::string(name) + " is not finite on the grid");
        out[k] = v;
        for (std::size_t a = n; a-- > 0;) {
            if (++idx[a] < axes[a].nodes()) {
                x[a] = axes[a].coord(idx[a]);
                break;
            }
            idx[a] = 0;
            x[a] = axes[a].coord(0);
        }
    }
    return out;
}

struct Contraction {
    std::vector<double> values;  // centre slice along the evolved axis
    double band = 0.0;
};

// Evolves `values` along the last of `axes` for unit time and keeps the slice at
// the centre of that axis.
Contraction contract_last(std::span<const AxisGrid> axes, std::vector<double> values, const UncertaintyInterval& iv,
                          const GridSpec& time) {
    std::vector<std::optional<UncertaintyInterval>> diffusion(axes.size());
    diffusion.back() = iv;
    DiagHeatSolver solver({axes.begin(), axes.end()}, diffusion, time.dt);
    Contraction c;
    c.band = solver.evolve(values, time.steps);
    const std::size_t len = axes.back().nodes();
    const std::size_t mid = axes.back().half_nodes;
    c.values.resize(values.size() / len);
    for (std::size_t r = 0; r < c.values.size(); ++r) c.values[r] = values[r * len + mid];
    return c;
}

ExpectationResult from_report(SolveReport r) {
    ExpectationResult out;
    out.value = r.value;
    out.error_estimate = r.error_estimate();
    out.method = ExpectationResult::Method::pde;
    out.diagnostics.push_back(std::move(r));
    return out;
}

struct BoxNode {
    double upper;
    std::vector<double> lo;
    std::vector<double> hi;
    bool operator<(const BoxNode& o) const { return upper < o.upper; }
};

} // namespace

RandomVectorSpec RandomVectorSpec::gnormal(GammaSet gamma) {
    Variant v = GNormal{std::move(gamma)};
    const std::size_t d = spec_dim(v);
    return {std::move(v), d};
}

RandomVectorSpec RandomVectorSpec::sequential(std::vector<UncertaintyInterval> intervals, std::vector<std::size_t> order) {
    if (intervals.empty()) throw PreconditionError("sequential vector needs at least one variable");
    order = resolve_order(order, intervals.size());
    Variant v = Sequential{std::move(intervals), std::move(order)};
    const std::size_t d = spec_dim(v);
    return {std::move(v), d};
}

RandomVectorSpec RandomVectorSpec::maximal_points(std::vector<Eigen::VectorXd> points) {
    if (points.empty()) throw PreconditionError("maximal distribution needs a nonempty support");
    for (const auto& p : points)
        if (p.size() != points.front().size()) throw DimensionError("support points differ in dimension");
    Variant v = Maximal{std::move(points), {}};
    const std::size_t d = spec_dim(v);
    return {std::move(v), d};
}

RandomVectorSpec RandomVectorSpec::maximal_box(std::vector<std::pair<double, double>> box) {
    if (box.empty()) throw PreconditionError("maximal distribution needs a nonempty support");
    for (const auto& [lo, hi] : box)
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw PreconditionError("support box must be bounded and ordered");
    Variant v = Maximal{{}, std::move(box)};
    const std::size_t d = spec_dim(v);
    return {std::move(v), d};
}

RandomVectorSpec RandomVectorSpec::linear_image(Eigen::MatrixXd a, RandomVectorSpec inner) {
    if (static_cast<std::size_t>(a.cols()) != inner.dim()) {
        std::ostringstream os;
        os << "linear image: matrix has " << a.cols() << " columns, inner vector has dimension " << inner.dim();
        throw DimensionError(os.str());
    }
    Variant v = LinearImage{std::move(a), std::make_shared<const RandomVectorSpec>(std::move(inner))};
    const std::size_t d = spec_dim(v);
    return {std::move(v), d};
}

std::string_view method_name(ExpectationResult::Method m) noexcept {
    switch (m) {
    case ExpectationResult::Method::pde: return "pde";
    case ExpectationResult::Method::nested: return "nested";
    case ExpectationResult::Method::maximal: return "maximal";
    case ExpectationResult::Method::oracle: return "oracle";
    }
    return "unknown";
}

ExpectationResult expect(const RandomVectorSpec& spec, const TestFunction& phi, const GridConfig& cfg) {
    require_arity(phi, spec.dim(), "expect");
    return std::visit(
        [&](const auto& s) -> ExpectationResult {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GNormal>) {
                return expect_gnormal(s.gamma, phi, 1.0, {}, cfg);
            } else if constexpr (std::is_same_v<T, Sequential>) {
                return expect_sequential(s.intervals, s.order, phi, cfg);
            } else if constexpr (std::is_same_v<T, Maximal>) {
                return expect_maximal(s, phi);
            } else {
                const RandomVectorSpec& inner = *s.inner;
                if (const auto* g = std::get_if<GNormal>(&inner.variant())) {
                    // A one-dimensional law for AX needs a single solve instead of one per inner axis.
                    GammaSet image = image_gamma(s.matrix, g->gamma);
                    if (image.is<Interval1D>() || image.is<RankOneFamily>()) return expect_gnormal(image, phi, 1.0, {}, cfg);
                }
                return expect(inner, phi.compose_linear(s.matrix), cfg);
            }
        },
        spec.variant());
}

ExpectationResult expect_gnormal(const GammaSet& gamma, const TestFunction& phi, double t, std::span<const double> x0,
                                 const GridConfig& cfg) {
    const std::size_t n = gamma.dim();
    require_arity(phi, n, "expect_gnormal");
    std::vector<double> origin(n, 0.0);
    if (x0.empty()) x0 = origin;
    if (x0.size() != n) throw DimensionError("expect_gnormal: evaluation point dimension differs from Γ");

    if (gamma.is<Interval1D>()) return from_report(solve_gheat_1d(gamma.as<Interval1D>().range, phi, t, x0[0], cfg));
    if (gamma.is<DiagonalBox>()) return from_report(solve_gheat_diag(gamma, phi, t, x0, cfg));
    if (gamma.is<ConvexHull>()) {
        const auto& gens = gamma.as<ConvexHull>().generators;
        if (n == 1) {
            double lo = gens.front()(0, 0), hi = lo;
            for (const auto& b : gens) {
                lo = std::min(lo, b(0, 0));
                hi = std::max(hi, b(0, 0));
            }
            return from_report(solve_gheat_1d(UncertaintyInterval(lo, hi), phi, t, x0[0], cfg));
        }
        if (n != 2) throw DimensionError("expect_gnormal: convex-hull Γ is supported in two dimensions only");
        return from_report(solve_gheat_hull(gamma, phi, t, x0, cfg));
    }

    // Γ = { r u uᵀ }: X = u s with s scalar G-normal on the range.
    const auto& fam = gamma.as<RankOneFamily>();
    const Eigen::VectorXd u = fam.direction;
    const Eigen::VectorXd base = Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(n));
    const Growth& g = phi.growth();
    const double un = u.norm();
    const double shift = int_pow(1.0 + base.norm(), g.order);
    const Growth line{g.order, g.constant * std::max(un, 1e-300) * std::max(1.0, int_pow(un, g.order)) *
                                   int_pow(2.0, g.order) * shift};
    TestFunction along(phi.name() + "(x0+u s)", 1,
                       [phi, u, base](std::span<const double> s) {
                           const Eigen::VectorXd x = base + u * s[0];
                           return phi(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
                       },
                       line);
    return from_report(solve_gheat_1d(fam.range, along, t, 0.0, cfg));
}

ExpectationResult expect_sequential(std::span<const UncertaintyInterval> intervals, std::span<const std::size_t> order,
                                    const TestFunction& phi, const GridConfig& cfg) {
    const std::size_t n = intervals.size();
    if (n == 0) throw PreconditionError("expect_sequential: no variables");
    if (n > 3) throw DimensionError("expect_sequential: at most three variables are supported");
    require_arity(phi, n, "expect_sequential");
    const std::vector<std::size_t> pi = resolve_order(order, n);

    // Variables with σ̄² = 0 are identically zero; the chain keeps the others in order.
    std::vector<std::size_t> chain;
    for (std::size_t v : pi)
        if (intervals[v].high() > 0.0) chain.push_back(v);
    const std::size_t k = chain.size();

    ExpectationResult out;
    out.method = ExpectationResult::Method::nested;
    std::vector<double> x(n, 0.0);
    if (k == 0) {
        out.value = phi(std::span<const double>(x));
        if (!std::isfinite(out.value)) throw DomainError("test function is not finite at the origin");
        return out;
    }

    // Level j evolves ψ_j along the axis of chain[j]; its growth sizes that axis.
    std::vector<Growth> growth(k);
    growth[k - 1] = phi.growth();
    for (std::size_t j = k - 1; j-- > 0;) growth[j] = propagate(growth[j + 1], std::sqrt(intervals[chain[j + 1]].high()));
    std::vector<AxisGrid> base(k);
    for (std::size_t j = 0; j < k; ++j)
        base[j] = resolve_axis(std::sqrt(intervals[chain[j]].high()), 0.0, growth[j], cfg);

    auto reordered = [&](std::span<const double> z) {
        std::vector<double> y(n, 0.0);
        for (std::size_t j = 0; j < z.size(); ++j) y[chain[j]] = z[j];
        return phi(std::span<const double>(y));
    };

    struct Level {
        double value;
        double band;
        std::size_t steps;
        double dt;
    };
    auto run = [&](bool fine, std::vector<Level>& levels) {
        std::vector<AxisGrid> axes = base;
        GridConfig c = cfg;
        if (fine) {
            for (auto& a : axes) a = a.refined();
            if (c.dt) *c.dt *= 0.25;
        }
        levels.assign(k, {});
        std::vector<GridSpec> time(k);
        for (std::size_t j = 0; j < k; ++j) {
            const UncertaintyInterval& iv = intervals[chain[j]];
            const std::optional<UncertaintyInterval> d[1] = {iv};
            resolve_time(time[j], 1.0, DiagHeatSolver::max_dt(std::span(axes).subspan(j, 1), d, c.courant), c);
            levels[j].steps = time[j].steps;
            levels[j].dt = time[j].dt;
        }
        const auto attenuation = [&](std::size_t j) {
            const double l = axes[j].half_width();
            return std::exp(-l * l / (2.0 * intervals[chain[j]].high()));
        };

        std::vector<double> table;
        const std::size_t top = k - 1;
        if (k == 3) {
            // Slabs along the outermost axis keep memory at two dimensions.
            const std::span<const AxisGrid> inner(axes.data() + 1, 2);
            table.resize(axes[0].nodes() * axes[1].nodes());
            double band = 0.0;
            for (std::size_t i0 = 0; i0 < axes[0].nodes(); ++i0) {
                const double z0 = axes[0].coord(i0);
                auto slab = tabulate_with(
                    inner,
                    [&](std::span<const double> z) {
                        const double full[3] = {z0, z[0], z[1]};
                        return reordered(full);
                    },
                    phi.name());
                Contraction c3 = contract_last(inner, std::move(slab), intervals[chain[2]], time[2]);
                band = std::max(band, c3.band);
                std::copy(c3.values.begin(), c3.values.end(), table.begin() + static_cast<std::ptrdiff_t>(i0 * axes[1].nodes()));
            }
            levels[top].band = band * attenuation(top);
        } else {
            auto full = tabulate_with(std::span<const AxisGrid>(axes.data(), k), reordered, phi.name());
            Contraction c0 = contract_last(std::span<const AxisGrid>(axes.data(), k), std::move(full), intervals[chain[top]],
                                           time[top]);
            levels[top].band = c0.band * attenuation(top);
            table = std::move(c0.values);
        }
        levels[top].value = table.empty() ? 0.0 : table[table.size() / 2];
        for (std::size_t j = top; j-- > 0;) {
            Contraction cj = contract_last(std::span<const AxisGrid>(axes.data(), j + 1), std::move(table),
                                           intervals[chain[j]], time[j]);
            levels[j].band = cj.band * attenuation(j);
            table = std::move(cj.values);
            levels[j].value = table[table.size() / 2];
        }
        return std::pair{table.front(), axes};
    };

    std::vector<Level> coarse_levels, fine_levels;
    auto [coarse, coarse_axes] = run(false, coarse_levels);
    double value = coarse;
    std::optional<double> delta;
    std::vector<Level>* reported = &coarse_levels;
    std::vector<AxisGrid> reported_axes = coarse_axes;
    if (cfg.refine) {
        auto [fine, fine_axes] = run(true, fine_levels);
        delta = std::abs(fine - coarse);
        value = fine;
        reported = &fine_levels;
        reported_axes = fine_axes;
    }

    out.value = value;
    double band_total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        SolveReport r;
        r.value = (*reported)[j].value;
        r.boundary_influence_estimate = (*reported)[j].band;
        if (cfg.refine) r.boundary_influence_estimate = std::max(r.boundary_influence_estimate, coarse_levels[j].band);
        r.steps_taken = (*reported)[j].steps;
        r.dt = (*reported)[j].dt;
        r.axes = {reported_axes[j]};
        r.degenerate = intervals[chain[j]].low() == 0.0;
        band_total += r.boundary_influence_estimate;
        out.diagnostics.push_back(std::move(r));
    }
    if (delta) out.diagnostics.front().refinement_delta = delta;
    out.error_estimate = band_total + delta.value_or(0.0);
    return out;
}

ExpectationResult expect_maximal(const Maximal& support, const TestFunction& phi) {
    ExpectationResult out;
    out.method = ExpectationResult::Method::maximal;
    if (!support.points.empty()) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& p : support.points) {
            require_arity(phi, static_cast<std::size_t>(p.size()), "expect_maximal");
            best = std::max(best, phi(std::span<const double>(p.data(), static_cast<std::size_t>(p.size()))));
        }
        out.value = best;
        return out;
    }
    if (support.box.empty()) throw PreconditionError("expect_maximal: empty support");
    const std::size_t d = support.box.size();
    require_arity(phi, d, "expect_maximal");

    std::vector<double> lo(d), hi(d);
    double radius_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        lo[i] = support.box[i].first;
        hi[i] = support.box[i].second;
        radius_sq += std::max(lo[i] * lo[i], hi[i] * hi[i]);
    }
    const Growth& g = phi.growth();
    const double lip = g.constant * (1.0 + 2.0 * int_pow(std::sqrt(radius_sq), g.order));

    auto eval = [&](const std::vector<double>& p) { return phi(std::span<const double>(p)); };
    auto centre_bound = [&](const std::vector<double>& l, const std::vector<double>& h, double& at_centre) {
        std::vector<double> c(d);
        double half_diag_sq = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            c[i] = 0.5 * (l[i] + h[i]);
            half_diag_sq += 0.25 * (h[i] - l[i]) * (h[i] - l[i]);
        }
        at_centre = eval(c);
        return at_centre + lip * std::sqrt(half_diag_sq);
    };

    double best = -std::numeric_limits<double>::infinity();
    if (d <= kMaxBoxVertexDim) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
            std::vector<double> v(d);
            for (std::size_t i = 0; i < d; ++i) v[i] = (mask >> i) & 1U ? hi[i] : lo[i];
            best = std::max(best, eval(v));
        }
    }
    std::priority_queue<BoxNode> queue;
    double centre_value = 0.0;
    const double ub = centre_bound(lo, hi, centre_value);
    best = std::max(best, centre_value);
    queue.push({ub, lo, hi});
    constexpr std::size_t kMaxEvaluations = 2'000'000;
    std::size_t evaluations = 0;
    while (!queue.empty()) {
        const double tol = 1e-6 * std::max(1.0, std::abs(best));
        if (queue.top().upper - best <= tol || evaluations >= kMaxEvaluations) break;
        BoxNode node = queue.top();
        queue.pop();
        std::size_t axis = 0;
        for (std::size_t i = 1; i < d; ++i)
            if (node.hi[i] - node.lo[i] > node.hi[axis] - node.lo[axis]) axis = i;
        const double mid = 0.5 * (node.lo[axis] + node.hi[axis]);
        for (int side = 0; side < 2; ++side) {
            BoxNode child = node;
            (side == 0 ? child.hi : child.lo)[axis] = mid;
            double cv = 0.0;
            child.upper = centre_bound(child.lo, child.hi, cv);
            ++evaluations;
            best = std::max(best, cv);
            if (child.upper > best) queue.push(std::move(child));
        }
    }
    out.value = best;
    out.error_estimate = queue.empty() ? 0.0 : std::max(0.0, queue.top().upper - best);
    return out;
}

ExpectationResult lower_expectation(const RandomVectorSpec& spec, const TestFunction& phi, const GridConfig& cfg) {
    ExpectationResult r = expect(spec, phi.negated(), cfg);
    r.value = -r.value;
    for (auto& d : r.diagnostics) d.value = -d.value;
    return r;
}

double convex_oracle_1d(const UncertaintyInterval& iv, const TestFunction& phi) {
    require_arity(phi, 1, "convex_oracle_1d");
    if (!phi.convex() && !phi.concave())
        throw PreconditionError("convex_oracle_1d: test function " + phi.name() + " is tagged neither convex nor concave");
    const double sigma = std::sqrt(phi.convex() ? iv.high() : iv.low());
    auto f = [&phi](double x) { return phi(x); };
    if (phi.kinks().empty()) return quadrature::normal_expectation(f, sigma);
    return quadrature::normal_expectation_piecewise(f, sigma, phi.kinks());
}

MeanCertaintyCheck mean_certainty_check(std::span<const UncertaintyInterval> intervals, const TestFunction& psi,
                                        double alpha, const GridConfig& cfg) {
    if (intervals.size() < 2) throw PreconditionError("mean_certainty_check: at least two variables required");
    const std::size_t k = intervals.size() - 1;
    if (psi.arity() != k) {
        std::ostringstream os;
        os << "mean_certainty_check: psi must depend on the first " << k << " variables, got arity " << psi.arity();
        throw DimensionError(os.str());
    }
    const Growth g{std::max(psi.growth().order, 0), psi.growth().constant + std::abs(alpha)};
    TestFunction with(psi.name() + " + a*y", k + 1,
                      [psi, alpha, k](std::span<const double> y) { return psi(y.first(k)) + alpha * y[k]; }, g);
    const ExpectationResult lhs = expect_sequential(intervals, {}, with, cfg);
    const ExpectationResult rhs = expect_sequential(intervals.first(k), {}, psi, cfg);
    MeanCertaintyCheck out;
    out.with_linear = lhs.value;
    out.without_linear = rhs.value;
    out.tolerance = std::max(cfg.tolerance * std::max(1.0, std::abs(rhs.value)),
                             5.0 * (lhs.error_estimate + rhs.error_estimate));
    out.pass = std::abs(lhs.value - rhs.value) <= out.tolerance;
    return out;
}

} // namespace gexpect
