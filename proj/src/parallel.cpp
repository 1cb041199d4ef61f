#include "latfade/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace latfade {

int apply_thread_cap() {
  if (const char* env = std::getenv("LATFADE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) omp_set_num_threads(static_cast<int>(n));
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace latfade
