#include "gexpect/pde.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "gexpect/parallel.hpp"

namespace gexpect {

namespace {

constexpr std::size_t kBand = 3;

std::vector<std::size_t> strides_of(std::span<const AxisGrid> axes) {
    std::vector<std::size_t> s(axes.size());
    std::size_t acc = 1;
    for (std::size_t a = axes.size(); a-- > 0;) {
        s[a] = acc;
        acc *= axes[a].nodes();
    }
    return s;
}

bool in_band(std::size_t i, std::size_t nodes) { return i <= kBand || i + kBand + 1 >= nodes; }

// exp(-d²/(2σ²t)) for the axis whose truncation is closest to x0 in standard deviations.
double tail_attenuation(std::span<const AxisGrid> axes, std::span<const double> sigma_sq, double t,
                        std::span<const double> x0) {
    double worst = 0.0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        if (!(sigma_sq[a] > 0.0)) continue;
        const double d = axes[a].half_width() - std::abs(x0[a]);
        worst = std::max(worst, std::exp(-d * d / (2.0 * sigma_sq[a] * t)));
    }
    return worst;
}

struct Pass {
    double value;
    double boundary;
    std::size_t steps;
    double dt;
    std::vector<AxisGrid> axes;
};

SolveReport with_refinement(const GridConfig& cfg, const std::function<Pass(bool)>& run, bool degenerate) {
    Pass coarse = run(false);
    SolveReport r;
    r.degenerate = degenerate;
    if (cfg.refine && coarse.steps > 0) {
        Pass fine = run(true);
        r.refinement_delta = std::abs(fine.value - coarse.value);
        r.boundary_influence_estimate = std::max(fine.boundary, coarse.boundary);
        coarse = std::move(fine);
    } else {
        r.boundary_influence_estimate = coarse.boundary;
    }
    r.value = coarse.value;
    r.steps_taken = coarse.steps;
    r.dt = coarse.dt;
    r.axes = std::move(coarse.axes);
    return r;
}

GridConfig refined_config(const GridConfig& cfg) {
    GridConfig fine = cfg;
    if (fine.dt) *fine.dt *= 0.25;
    return fine;
}

void check_point(std::span<const double> x0, std::size_t n, const char* who) {
    if (x0.size() != n) {
        std::ostringstream os;
        os << who << ": evaluation point has dimension " << x0.size() << ", expected " << n;
        throw DimensionError(os.str());
    }
    for (double v : x0)
        if (!std::isfinite(v)) throw DomainError(std::string(who) + ": non-finite evaluation point");
}

void check_horizon(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError(std::string(who) + ": horizon t must be finite and >= 0");
}

std::string format_matrix(const SymMatrix& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < m.dim(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

} // namespace

std::size_t Field::size() const noexcept {
    std::size_t s = 1;
    for (const auto& a : axes) s *= a.nodes();
    return s;
}

std::size_t Field::stride(std::size_t axis) const noexcept {
    std::size_t s = 1;
    for (std::size_t a = axis + 1; a < axes.size(); ++a) s *= axes[a].nodes();
    return s;
}

std::size_t Field::centre_index() const noexcept {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < axes.size(); ++a) idx += axes[a].half_nodes * stride(a);
    return idx;
}

Field tabulate(std::vector<AxisGrid> axes, const TestFunction& phi) {
    if (phi.arity() != axes.size()) throw DimensionError("tabulate: arity differs from grid dimension");
    Field f{std::move(axes), {}};
    const std::size_t n = f.axes.size();
    f.values.resize(f.size());
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    for (std::size_t a = 0; a < n; ++a) x[a] = f.axes[a].coord(0);
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const double v = phi(std::span<const double>(x));
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "test function " << phi.name() << " is not finite on the grid";
            throw DomainError(os.str());
        }
        f.values[k] = v;
        for (std::size_t a = n; a-- > 0;) {
            if (++idx[a] < f.axes[a].nodes()) {
                x[a] = f.axes[a].coord(idx[a]);
                break;
            }
            idx[a] = 0;
            x[a] = f.axes[a].coord(0);
        }
    }
    return f;
}

DiagHeatSolver::DiagHeatSolver(std::vector<AxisGrid> axes, std::vector<std::optional<UncertaintyInterval>> diffusion,
                               double dt)
    : axes_(std::move(axes)) {
    if (axes_.empty() || diffusion.size() != axes_.size())
        throw DimensionError("DiagHeatSolver: one diffusion entry per axis required");
    strides_ = strides_of(axes_);
    size_ = strides_[0] * axes_[0].nodes();
    active_.resize(axes_.size());
    hi_.resize(axes_.size());
    lo_.resize(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        active_[a] = diffusion[a].has_value() && diffusion[a]->high() > 0.0;
        if (!active_[a]) continue;
        const double k = dt / (2.0 * axes_[a].spacing * axes_[a].spacing);
        hi_[a] = diffusion[a]->high() * k;
        lo_[a] = diffusion[a]->low() * k;
    }
}

double DiagHeatSolver::max_dt(std::span<const AxisGrid> axes,
                              std::span<const std::optional<UncertaintyInterval>> diffusion, double courant) {
    double rate = 0.0;
    for (std::size_t a = 0; a < axes.size(); ++a)
        if (diffusion[a]) rate += diffusion[a]->high() / (axes[a].spacing * axes[a].spacing);
    if (!(rate > 0.0)) throw PreconditionError("max_dt: no diffusing axis");
    return courant / rate;
}

double DiagHeatSolver::step(std::span<const double> in, std::span<double> out) const {
    if (in.size() != size_ || out.size() != size_) throw DimensionError("DiagHeatSolver::step: buffer size mismatch");
    const std::size_t n = axes_.size();
    const std::size_t last = n - 1;
    const std::size_t row_len = axes_[last].nodes();
    const std::size_t rows = size_ / row_len;
    const bool last_active = active_[last];
    const std::size_t first = last_active ? 1 : 0;
    const std::size_t count = last_active ? row_len - 2 : row_len;
    const auto& k = simd::kernels();
    std::vector<double> band(rows, 0.0);

#ifdef GEXPECT_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(solver_threads())
#endif
    for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(rows); ++rr) {
        const auto r = static_cast<std::size_t>(rr);
        const double* src = in.data() + r * row_len;
        double* dst = out.data() + r * row_len;
        bool frozen = false;
        bool row_in_band = false;
        std::size_t rem = r;
        for (std::size_t a = last; a-- > 0;) {
            const std::size_t i = rem % axes_[a].nodes();
            rem /= axes_[a].nodes();
            if (!active_[a]) continue;
            if (i == 0 || i + 1 == axes_[a].nodes()) frozen = true;
            if (in_band(i, axes_[a].nodes())) row_in_band = true;
        }
        std::copy(src, src + row_len, dst);
        if (frozen) continue;
        for (std::size_t a = 0; a < n; ++a) {
            if (!active_[a]) continue;
            const std::size_t s = strides_[a];
            k.gbar_accumulate(src + first, src + first - s, src + first + s, dst + first, count, hi_[a], lo_[a]);
        }
        double m = 0.0;
        if (row_in_band) {
            for (std::size_t i = first; i < first + count; ++i) m = std::max(m, std::abs(dst[i] - src[i]));
        } else if (last_active) {
            const std::size_t w = std::min(kBand, row_len - 2);
            for (std::size_t i = 1; i <= w; ++i) {
                m = std::max(m, std::abs(dst[i] - src[i]));
                m = std::max(m, std::abs(dst[row_len - 1 - i] - src[row_len - 1 - i]));
            }
        }
        band[r] = m;
    }
    double worst = 0.0;
    for (double m : band) worst = std::max(worst, m);
    return worst;
}

double DiagHeatSolver::evolve(std::vector<double>& values, std::size_t steps) const {
    std::vector<double> scratch(values.size());
    double band = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        band += step(values, scratch);
        values.swap(scratch);
    }
    return band;
}

void require_diagonally_dominant(const ConvexHull& hull) {
    for (const auto& b : hull.generators) {
        for (std::size_t i = 0; i < b.dim(); ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < b.dim(); ++j)
                if (j != i) off += std::abs(b(i, j));
            if (b(i, i) - off < -kAlgebraicZero) {
                throw InadmissibleError("hull generator " + format_matrix(b) +
                                        " is not diagonally dominant; the nine-point scheme would not be monotone");
            }
        }
    }
}

HullHeatSolver::HullHeatSolver(std::vector<AxisGrid> axes, const ConvexHull& hull, double dt) : axes_(std::move(axes)) {
    if (axes_.size() != 2) throw DimensionError("HullHeatSolver: two axes required");
    if (axes_[0].spacing != axes_[1].spacing) throw PreconditionError("HullHeatSolver: axes must share one spacing");
    if (hull.generators.empty()) throw PreconditionError("HullHeatSolver: empty hull");
    require_diagonally_dominant(hull);
    const double k = dt / (2.0 * axes_[0].spacing * axes_[0].spacing);
    for (const auto& b : hull.generators) {
        if (b.dim() != 2) throw DimensionError("HullHeatSolver: generators must be 2x2");
        // Axis 1 is contiguous (the kernel's x direction); axis 0 is the row stride.
        const double off = b(0, 1);
        coeffs_.push_back({b(1, 1) * k, b(0, 0) * k, std::max(off, 0.0) * k, std::max(-off, 0.0) * k});
    }
}

double HullHeatSolver::max_dt(double spacing, const ConvexHull& hull, double courant) {
    double weight = 0.0;
    for (const auto& b : hull.generators) weight = std::max(weight, b.matrix().cwiseAbs().sum());
    if (!(weight > 0.0)) throw PreconditionError("max_dt: hull has only the zero matrix");
    return courant * spacing * spacing / weight;
}

double HullHeatSolver::step(std::span<const double> in, std::span<double> out) const {
    const std::size_t ny = axes_[0].nodes();
    const std::size_t nx = axes_[1].nodes();
    if (in.size() != nx * ny || out.size() != nx * ny) throw DimensionError("HullHeatSolver::step: buffer size mismatch");
    const auto& k = simd::kernels();
    std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(nx), out.begin());
    std::copy(in.end() - static_cast<std::ptrdiff_t>(nx), in.end(), out.end() - static_cast<std::ptrdiff_t>(nx));
    std::vector<double> band(ny, 0.0);

#ifdef GEXPECT_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(solver_threads())
#endif
    for (std::ptrdiff_t rr = 1; rr < static_cast<std::ptrdiff_t>(ny) - 1; ++rr) {
        const auto r = static_cast<std::size_t>(rr);
        const double* src = in.data() + r * nx;
        double* dst = out.data() + r * nx;
        std::copy(src, src + nx, dst);
        k.hull_accumulate(src + 1, static_cast<std::ptrdiff_t>(nx), dst + 1, nx - 2, coeffs_.data(), coeffs_.size());
        double m = 0.0;
        if (in_band(r, ny)) {
            for (std::size_t i = 1; i + 1 < nx; ++i) m = std::max(m, std::abs(dst[i] - src[i]));
        } else {
            const std::size_t w = std::min(kBand, nx - 2);
            for (std::size_t i = 1; i <= w; ++i) {
                m = std::max(m, std::abs(dst[i] - src[i]));
                m = std::max(m, std::abs(dst[nx - 1 - i] - src[nx - 1 - i]));
            }
        }
        band[r] = m;
    }
    double worst = 0.0;
    for (double m : band) worst = std::max(worst, m);
    return worst;
}

double HullHeatSolver::evolve(std::vector<double>& values, std::size_t steps) const {
    std::vector<double> scratch(values.size());
    double band = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        band += step(values, scratch);
        values.swap(scratch);
    }
    return band;
}

SolveReport solve_gheat_1d(const UncertaintyInterval& iv, const TestFunction& phi, double t, double x0,
                           const GridConfig& cfg) {
    const double point[1] = {x0};
    return solve_gheat_diag(GammaSet::box({iv}), phi, t, point, cfg);
}

SolveReport solve_gheat_diag(const GammaSet& box, const TestFunction& phi, double t, std::span<const double> x0,
                             const GridConfig& cfg) {
    if (!box.is<DiagonalBox>() && !box.is<Interval1D>())
        throw PreconditionError("solve_gheat_diag: uncertainty set must be an interval or a diagonal box");
    std::vector<UncertaintyInterval> ranges =
        box.is<Interval1D>() ? std::vector<UncertaintyInterval>{box.as<Interval1D>().range} : box.as<DiagonalBox>().ranges;
    const std::size_t n = ranges.size();
    if (n > 3) throw DimensionError("solve_gheat_diag: at most three dimensions are supported");
    if (phi.arity() != n) throw DimensionError("solve_gheat_diag: test function arity differs from dimension");
    check_point(x0, n, "solve_gheat_diag");
    check_horizon(t, "solve_gheat_diag");

    double sigma_max_sq = 0.0;
    bool degenerate = false;
    for (const auto& iv : ranges) {
        sigma_max_sq = std::max(sigma_max_sq, iv.high());
        if (iv.high() > 0.0 && iv.low() == 0.0) degenerate = true;
    }
    if (t == 0.0 || sigma_max_sq == 0.0) {
        const double v = phi(x0);
        if (!std::isfinite(v)) throw DomainError("test function is not finite at the evaluation point");
        SolveReport r;
        r.value = v;
        return r;
    }

    std::vector<AxisGrid> base(n);
    std::vector<std::optional<UncertaintyInterval>> diffusion(n);
    std::vector<double> sigma_sq(n);
    for (std::size_t a = 0; a < n; ++a) {
        // Axes without variance get a grid too, sized on the largest axis, so the
        // evaluation point can be interpolated; they simply do not diffuse.
        sigma_sq[a] = ranges[a].high() > 0.0 ? ranges[a].high() : sigma_max_sq;
        base[a] = resolve_axis(std::sqrt(sigma_sq[a] * t), std::abs(x0[a]), phi.growth(), cfg);
        if (ranges[a].high() > 0.0) diffusion[a] = ranges[a];
    }

    auto run = [&](bool fine) {
        std::vector<AxisGrid> axes = base;
        if (fine)
            for (auto& a : axes) a = a.refined();
        const GridConfig c = fine ? refined_config(cfg) : cfg;
        GridSpec spec{axes, 0.0, 0.0, 0};
        resolve_time(spec, t, DiagHeatSolver::max_dt(axes, diffusion, c.courant), c);
        Field f = tabulate(axes, phi);
        DiagHeatSolver solver(axes, diffusion, spec.dt);
        const double band = solver.evolve(f.values, spec.steps);
        const double value = interpolate(axes, f.values, x0);
        return Pass{value, band * tail_attenuation(axes, sigma_sq, t, x0), spec.steps, spec.dt, std::move(axes)};
    };
    return with_refinement(cfg, run, degenerate);
}

SolveReport solve_gheat_hull(const GammaSet& gamma, const TestFunction& phi, double t, std::span<const double> x0,
                             const GridConfig& cfg) {
    if (!gamma.is<ConvexHull>()) throw PreconditionError("solve_gheat_hull: uncertainty set must be a convex hull");
    const ConvexHull& hull = gamma.as<ConvexHull>();
    if (gamma.dim() != 2) throw DimensionError("solve_gheat_hull: only two-dimensional hulls are supported");
    if (phi.arity() != 2) throw DimensionError("solve_gheat_hull: test function arity must be 2");
    check_point(x0, 2, "solve_gheat_hull");
    check_horizon(t, "solve_gheat_hull");
    require_diagonally_dominant(hull);

    double sigma_sq[2] = {0.0, 0.0};
    bool degenerate = false;
    for (const auto& b : hull.generators) {
        sigma_sq[0] = std::max(sigma_sq[0], b(0, 0));
        sigma_sq[1] = std::max(sigma_sq[1], b(1, 1));
    }
    const double sigma_max_sq = std::max(sigma_sq[0], sigma_sq[1]);
    if (t == 0.0 || sigma_max_sq == 0.0) {
        SolveReport r;
        r.value = phi(x0);
        if (!std::isfinite(r.value)) throw DomainError("test function is not finite at the evaluation point");
        return r;
    }
    for (double& s : sigma_sq)
        if (s == 0.0) s = sigma_max_sq;
    // Lowest attainable variance per axis decides the degenerate flag.
    for (std::size_t a = 0; a < 2; ++a) {
        double low = sigma_sq[a];
        for (const auto& b : hull.generators) low = std::min(low, b(a, a));
        if (low == 0.0) degenerate = true;
    }

    AxisGrid ax0 = resolve_axis(std::sqrt(sigma_sq[0] * t), std::abs(x0[0]), phi.growth(), cfg);
    AxisGrid ax1 = resolve_axis(std::sqrt(sigma_sq[1] * t), std::abs(x0[1]), phi.growth(), cfg);
    const double h = std::min(ax0.spacing, ax1.spacing);
    auto rebuild = [h](const AxisGrid& a) {
        return AxisGrid{h, static_cast<std::size_t>(std::ceil(a.half_width() / h - 1e-9))};
    };
    const std::vector<AxisGrid> base{rebuild(ax0), rebuild(ax1)};

    auto run = [&](bool fine) {
        std::vector<AxisGrid> axes = base;
        if (fine)
            for (auto& a : axes) a = a.refined();
        const GridConfig c = fine ? refined_config(cfg) : cfg;
        GridSpec spec{axes, 0.0, 0.0, 0};
        resolve_time(spec, t, HullHeatSolver::max_dt(axes[0].spacing, hull, c.courant), c);
        Field f = tabulate(axes, phi);
        HullHeatSolver solver(axes, hull, spec.dt);
        const double band = solver.evolve(f.values, spec.steps);
        const double value = interpolate(axes, f.values, x0);
        return Pass{value, band * tail_attenuation(axes, sigma_sq, t, x0), spec.steps, spec.dt, std::move(axes)};
    };
    return with_refinement(cfg, run, degenerate);
}

} // namespace gexpect
