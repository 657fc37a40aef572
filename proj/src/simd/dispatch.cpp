#include "gexpect/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace gexpect::simd {

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "unknown";
}

const KernelTable* kernels_for(Backend b) noexcept {
    switch (b) {
    case Backend::scalar: return &detail::kScalarTable;
    case Backend::avx2: return detail::avx2_table();
    case Backend::neon: return detail::neon_table();
    }
    return nullptr;
}

namespace {

const KernelTable& select_kernels() noexcept {
    if (const char* env = std::getenv("GEXPECT_SIMD")) {
        const std::string want(env);
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
            if (want == backend_name(b)) {
                if (const auto* t = kernels_for(b)) return *t;
            }
        }
    }
    if (const auto* t = detail::avx2_table()) return *t;
    if (const auto* t = detail::neon_table()) return *t;
    return detail::kScalarTable;
}

} // namespace

const KernelTable& kernels() noexcept {
    static const KernelTable& active = select_kernels();
    return active;
}

} // namespace gexpect::simd
