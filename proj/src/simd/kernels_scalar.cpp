#include "gexpect/simd/kernels.hpp"

namespace gexpect::simd {
namespace {

void gbar_accumulate_scalar(const double* center, const double* minus, const double* plus, double* acc,
                            std::size_t n, double hi, double lo) {
    for (std::size_t k = 0; k < n; ++k) {
        const double c = center[k];
        const double d = (minus[k] + plus[k]) - (c + c);
        const double dp = d > 0.0 ? d : 0.0;
        const double dn = d < 0.0 ? d : 0.0;
        acc[k] = acc[k] + (hi * dp + lo * dn);
    }
}

void hull_accumulate_scalar(const double* center, std::ptrdiff_t stride, double* acc, std::size_t n,
                            const HullCoeffs* gens, std::size_t n_gens) {
    for (std::size_t k = 0; k < n; ++k) {
        const double* p = center + k;
        const double c2 = p[0] + p[0];
        const double ew = p[1] + p[-1];
        const double ns = p[stride] + p[-stride];
        const double dxx = ew - c2;
        const double dyy = ns - c2;
        const double cross = ew + ns;
        const double dpos = ((p[stride + 1] + p[-stride - 1]) + c2) - cross;
        const double dneg = ((p[stride - 1] + p[-stride + 1]) + c2) - cross;
        double best = 0.0;
        for (std::size_t g = 0; g < n_gens; ++g) {
            const HullCoeffs& h = gens[g];
            const double f = ((h.xx * dxx + h.yy * dyy) + h.pos * dpos) + h.neg * dneg;
            best = (g == 0 || f > best) ? f : best;
        }
        acc[k] = acc[k] + best;
    }
}

} // namespace

namespace detail {
const KernelTable kScalarTable{Backend::scalar, &gbar_accumulate_scalar, &hull_accumulate_scalar};
} // namespace detail

} // namespace gexpect::simd
