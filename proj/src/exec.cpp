#include "chcross/exec.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace chcross {

Exec Exec::openmp(int threads) {
  Exec ex;
  ex.parallel = true;
  ex.threads = threads;
  if (const char* cap = std::getenv("CHCROSS_THREADS")) {
    try {
      const int c = std::stoi(cap);
      if (c > 0 && (ex.threads == 0 || c < ex.threads)) ex.threads = c;
    } catch (...) {
      // An unparseable cap is ignored; the policy falls back to the runtime
      // default rather than failing the run over an env var typo.
    }
  }
  return ex;
}

int resolved_threads(const Exec& ex) {
#ifdef _OPENMP
  if (ex.parallel) {
    const int dflt = omp_get_max_threads();
    return ex.threads > 0 && ex.threads < dflt ? ex.threads : dflt;
  }
#endif
  (void)ex;
  return 1;
}

}  // namespace chcross
