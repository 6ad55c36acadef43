#include "pks/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pks::par {

int thread_count() {
#ifdef _OPENMP
  static const int cached = [] {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("PKS_THREADS")) {
      try {
        int cap = std::stoi(env);
        if (cap >= 1 && cap < n) n = cap;
      } catch (...) {
        // unparsable PKS_THREADS: keep the OpenMP default
      }
    }
    return n;
  }();
  return cached;
#else
  return 1;
#endif
}

}  // namespace pks::par
