#pragma once

// Stencil kernels for the explicit G-heat step. Every backend evaluates the
// same expression tree in the same order, so results are bit-identical across
// scalar, AVX2 and NEON builds (the library is compiled with -ffp-contract=off).

#include <cstddef>
#include <span>
#include <string_view>

namespace gexpect::simd {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;

/// Per-generator coefficients of the nine-point monotone stencil, with dt/h²
/// already folded in:
///   flux = xx*(e+w-2c) + yy*(n+s-2c) + pos*(ne+sw+2c-e-w-n-s) + neg*(nw+se+2c-e-w-n-s)
struct HullCoeffs {
    double xx;
    double yy;
    double pos;
    double neg;
};

/// acc[k] += hi * max(d, 0) + lo * min(d, 0),  d = (minus[k] + plus[k]) - 2 center[k].
/// With hi = σ̄² dt / (2h²), lo = σ̲² dt / (2h²) this adds dt·Ḡ(D²u).
using GbarAccumulateFn = void (*)(const double* center, const double* minus, const double* plus,
                                  double* acc, std::size_t n, double hi, double lo);

/// acc[k] += max_g flux_g(k) for a row of nodes starting at `center`, with
/// `stride` the distance between rows (the y direction).
using HullAccumulateFn = void (*)(const double* center, std::ptrdiff_t stride, double* acc,
                                  std::size_t n, const HullCoeffs* gens, std::size_t n_gens);

struct KernelTable {
    Backend backend;
    GbarAccumulateFn gbar_accumulate;
    HullAccumulateFn hull_accumulate;
};

/// Table for a specific backend, or nullptr when it is not compiled in or the
/// CPU lacks the instructions.
const KernelTable* kernels_for(Backend b) noexcept;

/// Active table: the best supported backend, unless GEXPECT_SIMD names one
/// ("scalar", "avx2", "neon").
const KernelTable& kernels() noexcept;

namespace detail {
extern const KernelTable kScalarTable;
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;
} // namespace detail

} // namespace gexpect::simd
