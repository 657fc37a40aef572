#include "gexpect/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gexpect {

double truncation_half_width(double sigma_sqrt_t, double x0_abs, const Growth& growth, const GridConfig& cfg) {
    double k = cfg.width_sigmas;
    double half_width = x0_abs + k * sigma_sqrt_t;
    const double target = 0.1 * cfg.tolerance;
    while (k < 40.0) {
        const double tail = growth.constant * std::pow(1.0 + half_width, growth.order) * std::exp(-0.5 * k * k);
        if (tail < target) break;
        k += 1.0;
        half_width = x0_abs + k * sigma_sqrt_t;
    }
    return half_width;
}

AxisGrid resolve_axis(double sigma_sqrt_t, double x0_abs, const Growth& growth, const GridConfig& cfg) {
    if (!(sigma_sqrt_t > 0.0)) throw PreconditionError("resolve_axis: scale must be positive");
    double half_width = cfg.half_width ? *cfg.half_width : truncation_half_width(sigma_sqrt_t, x0_abs, growth, cfg);
    if (!(half_width > 0.0)) throw PreconditionError("grid half-width must be positive");
    if (x0_abs > half_width) {
        std::ostringstream os;
        os << "evaluation point |x0| = " << x0_abs << " lies outside [-L, L] with L = " << half_width;
        throw DomainError(os.str());
    }
    double h = cfg.spacing ? *cfg.spacing : std::min(0.02 * half_width, cfg.spacing_fraction * sigma_sqrt_t);
    h *= cfg.spacing_scale;
    if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("grid spacing must be positive");
    const double ratio = half_width / h;
    auto half_nodes = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    half_nodes = std::max<std::size_t>(half_nodes, 8);
    return {h, half_nodes};
}

void resolve_time(GridSpec& spec, double t, double dt_max, const GridConfig& cfg) {
    spec.horizon = t;
    if (t == 0.0) {
        spec.dt = 0.0;
        spec.steps = 0;
        return;
    }
    if (cfg.dt) {
        if (!(*cfg.dt > 0.0)) throw PreconditionError("time step must be positive");
        if (*cfg.dt > dt_max * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "time step " << *cfg.dt << " violates the monotonicity (CFL) bound " << dt_max;
            throw CflError(os.str());
        }
        spec.steps = static_cast<std::size_t>(std::ceil(t / *cfg.dt - 1e-9));
    } else {
        spec.steps = static_cast<std::size_t>(std::ceil(t / dt_max - 1e-9));
    }
    spec.steps = std::max<std::size_t>(spec.steps, 1);
    spec.dt = t / static_cast<double>(spec.steps);
}

double interpolate(std::span<const AxisGrid> axes, std::span<const double> values, std::span<const double> x) {
    const std::size_t n = axes.size();
    if (x.size() != n) throw DimensionError("interpolate: point dimension differs from grid");
    std::vector<std::size_t> base(n), stride(n);
    std::vector<double> frac(n);
    std::size_t s = 1;
    for (std::size_t a = n; a-- > 0;) {
        stride[a] = s;
        s *= axes[a].nodes();
    }
    if (values.size() != s) throw DimensionError("interpolate: value count differs from grid size");
    for (std::size_t a = 0; a < n; ++a) {
        const double pos = x[a] / axes[a].spacing + static_cast<double>(axes[a].half_nodes);
        const double last = static_cast<double>(axes[a].nodes() - 1);
        if (pos < -1e-9 || pos > last + 1e-9) throw DomainError("interpolate: point outside the grid");
        const double clamped = std::clamp(pos, 0.0, last);
        auto i = static_cast<std::size_t>(std::floor(clamped));
        if (i + 1 >= axes[a].nodes()) i = axes[a].nodes() - 2;
        base[a] = i;
        frac[a] = clamped - static_cast<double>(i);
    }
    double out = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
        double w = 1.0;
        std::size_t idx = 0;
        for (std::size_t a = 0; a < n; ++a) {
            const bool up = (corner >> a) & 1U;
            w *= up ? frac[a] : 1.0 - frac[a];
            idx += (base[a] + (up ? 1 : 0)) * stride[a];
        }
        if (w != 0.0) out += w * values[idx];
    }
    return out;
}

} // namespace gexpect
