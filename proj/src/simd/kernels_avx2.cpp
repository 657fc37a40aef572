#include "gexpect/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define GEXPECT_X86 1
#endif

namespace gexpect::simd {

#ifdef GEXPECT_X86
namespace {

__attribute__((target("avx2"))) void gbar_accumulate_avx2(const double* center, const double* minus,
                                                          const double* plus, double* acc, std::size_t n,
                                                          double hi, double lo) {
    const __m256d vhi = _mm256_set1_pd(hi);
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d c = _mm256_loadu_pd(center + k);
        const __m256d s = _mm256_add_pd(_mm256_loadu_pd(minus + k), _mm256_loadu_pd(plus + k));
        const __m256d d = _mm256_sub_pd(s, _mm256_add_pd(c, c));
        const __m256d dp = _mm256_max_pd(d, zero);
        const __m256d dn = _mm256_min_pd(d, zero);
        const __m256d f = _mm256_add_pd(_mm256_mul_pd(vhi, dp), _mm256_mul_pd(vlo, dn));
        _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), f));
    }
    for (; k < n; ++k) {
        const double c = center[k];
        const double d = (minus[k] + plus[k]) - (c + c);
        const double dp = d > 0.0 ? d : 0.0;
        const double dn = d < 0.0 ? d : 0.0;
        acc[k] = acc[k] + (hi * dp + lo * dn);
    }
}

__attribute__((target("avx2"))) void hull_accumulate_avx2(const double* center, std::ptrdiff_t stride,
                                                          double* acc, std::size_t n, const HullCoeffs* gens,
                                                          std::size_t n_gens) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const double* p = center + k;
        const __m256d c = _mm256_loadu_pd(p);
        const __m256d c2 = _mm256_add_pd(c, c);
        const __m256d ew = _mm256_add_pd(_mm256_loadu_pd(p + 1), _mm256_loadu_pd(p - 1));
        const __m256d ns = _mm256_add_pd(_mm256_loadu_pd(p + stride), _mm256_loadu_pd(p - stride));
        const __m256d dxx = _mm256_sub_pd(ew, c2);
        const __m256d dyy = _mm256_sub_pd(ns, c2);
        const __m256d cross = _mm256_add_pd(ew, ns);
        const __m256d dpos = _mm256_sub_pd(
            _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(p + stride + 1), _mm256_loadu_pd(p - stride - 1)), c2),
            cross);
        const __m256d dneg = _mm256_sub_pd(
            _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(p + stride - 1), _mm256_loadu_pd(p - stride + 1)), c2),
            cross);
        __m256d best = _mm256_setzero_pd();
        for (std::size_t g = 0; g < n_gens; ++g) {
            const HullCoeffs& h = gens[g];
            __m256d f = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(h.xx), dxx),
                                      _mm256_mul_pd(_mm256_set1_pd(h.yy), dyy));
            f = _mm256_add_pd(f, _mm256_mul_pd(_mm256_set1_pd(h.pos), dpos));
            f = _mm256_add_pd(f, _mm256_mul_pd(_mm256_set1_pd(h.neg), dneg));
            best = g == 0 ? f : _mm256_max_pd(f, best);
        }
        _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), best));
    }
    if (k < n) detail::kScalarTable.hull_accumulate(center + k, stride, acc + k, n - k, gens, n_gens);
}

const KernelTable kAvx2Table{Backend::avx2, &gbar_accumulate_avx2, &hull_accumulate_avx2};

} // namespace

namespace detail {
const KernelTable* avx2_table() noexcept {
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &kAvx2Table : nullptr;
}
} // namespace detail

#else

namespace detail {
const KernelTable* avx2_table() noexcept { return nullptr; }
} // namespace detail

#endif

} // namespace gexpect::simd
