#pragma once

namespace fuspos::parallel {

/// Thread cap from the FUSPOS_THREADS environment variable.
/// 0 (or unset/malformed) means "auto": use the OpenMP default.
int thread_cap();

/// Number of threads a parallel kernel should request right now.
int effective_threads();

}  // namespace fuspos::parallel
