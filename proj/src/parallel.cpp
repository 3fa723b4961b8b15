#include "fuspos/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fuspos::parallel {

int thread_cap() {
    const char* env = std::getenv("FUSPOS_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) return 0;
    return static_cast<int>(v);
}

int effective_threads() {
    int cap = thread_cap();
#ifdef _OPENMP
    return cap > 0 ? cap : omp_get_max_threads();
#else
    (void)cap;
    return 1;
#endif
}

}  // namespace fuspos::parallel
