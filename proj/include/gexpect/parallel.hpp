#pragma once

namespace gexpect {

/// Worker count for stencil sweeps: GEXPECT_THREADS if set and positive,
/// otherwise (0 or unset) the OpenMP default. Always 1 without OpenMP.
int solver_threads();

} // namespace gexpect
