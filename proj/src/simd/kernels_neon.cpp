#include "gexpect/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#define GEXPECT_NEON 1
#endif

namespace gexpect::simd {

#ifdef GEXPECT_NEON
namespace {

// vmaxq/vminq treat signed zeros differently from the scalar select; use
// compare + select so every backend agrees bit for bit.
inline float64x2_t select_gt(float64x2_t a, float64x2_t b) { return vbslq_f64(vcgtq_f64(a, b), a, b); }
inline float64x2_t select_lt(float64x2_t a, float64x2_t b) { return vbslq_f64(vcltq_f64(a, b), a, b); }

void gbar_accumulate_neon(const double* center, const double* minus, const double* plus, double* acc,
                          std::size_t n, double hi, double lo) {
    const float64x2_t vhi = vdupq_n_f64(hi);
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2_t c = vld1q_f64(center + k);
        const float64x2_t d = vsubq_f64(vaddq_f64(vld1q_f64(minus + k), vld1q_f64(plus + k)), vaddq_f64(c, c));
        const float64x2_t f = vaddq_f64(vmulq_f64(vhi, select_gt(d, zero)), vmulq_f64(vlo, select_lt(d, zero)));
        vst1q_f64(acc + k, vaddq_f64(vld1q_f64(acc + k), f));
    }
    if (k < n) detail::kScalarTable.gbar_accumulate(center + k, minus + k, plus + k, acc + k, n - k, hi, lo);
}

void hull_accumulate_neon(const double* center, std::ptrdiff_t stride, double* acc, std::size_t n,
                          const HullCoeffs* gens, std::size_t n_gens) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const double* p = center + k;
        const float64x2_t c = vld1q_f64(p);
        const float64x2_t c2 = vaddq_f64(c, c);
        const float64x2_t ew = vaddq_f64(vld1q_f64(p + 1), vld1q_f64(p - 1));
        const float64x2_t ns = vaddq_f64(vld1q_f64(p + stride), vld1q_f64(p - stride));
        const float64x2_t dxx = vsubq_f64(ew, c2);
        const float64x2_t dyy = vsubq_f64(ns, c2);
        const float64x2_t cross = vaddq_f64(ew, ns);
        const float64x2_t dpos =
            vsubq_f64(vaddq_f64(vaddq_f64(vld1q_f64(p + stride + 1), vld1q_f64(p - stride - 1)), c2), cross);
        const float64x2_t dneg =
            vsubq_f64(vaddq_f64(vaddq_f64(vld1q_f64(p + stride - 1), vld1q_f64(p - stride + 1)), c2), cross);
        float64x2_t best = vdupq_n_f64(0.0);
        for (std::size_t g = 0; g < n_gens; ++g) {
            const HullCoeffs& h = gens[g];
            float64x2_t f = vaddq_f64(vmulq_f64(vdupq_n_f64(h.xx), dxx), vmulq_f64(vdupq_n_f64(h.yy), dyy));
            f = vaddq_f64(f, vmulq_f64(vdupq_n_f64(h.pos), dpos));
            f = vaddq_f64(f, vmulq_f64(vdupq_n_f64(h.neg), dneg));
            best = g == 0 ? f : select_gt(f, best);
        }
        vst1q_f64(acc + k, vaddq_f64(vld1q_f64(acc + k), best));
    }
    if (k < n) detail::kScalarTable.hull_accumulate(center + k, stride, acc + k, n - k, gens, n_gens);
}

const KernelTable kNeonTable{Backend::neon, &gbar_accumulate_neon, &hull_accumulate_neon};

} // namespace

namespace detail {
const KernelTable* neon_table() noexcept { return &kNeonTable; }
} // namespace detail

#else

namespace detail {
const KernelTable* neon_table() noexcept { return nullptr; }
} // namespace detail

#endif

} // namespace gexpect::simd
