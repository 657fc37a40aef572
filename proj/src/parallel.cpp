#include "gexpect/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef GEXPECT_HAVE_OPENMP
#include <omp.h>
#endif

namespace gexpect {

int solver_threads() {
#ifdef GEXPECT_HAVE_OPENMP
    static const int threads = [] {
        if (const char* env = std::getenv("GEXPECT_THREADS")) {
            try {
                const int n = std::stoi(env);
                if (n > 0) return n;
            } catch (const std::exception&) {
            }
        }
        return omp_get_max_threads();
    }();
    return threads;
#else
    return 1;
#endif
}

} // namespace gexpect
