#include "logcave/parallel.hpp"

#include <cstdlib>
#include <string>

namespace logcave {

int max_workers() {
#ifdef LOGCAVE_HAS_OPENMP
  int cap = omp_get_max_threads();
#else
  int cap = 1;
#endif
  if (const char* env = std::getenv("LOGCAVE_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1 && n < cap) cap = n;
    } catch (...) {
      // Unparseable value: ignore and keep OpenMP's default.
    }
  }
  return cap;
}

}  // namespace logcave
