#pragma once

#include <cstddef>
#include <vector>

namespace chcross {

// Execution policy for assembly, matvec and norm reductions.
//
// Serial execution is the default everywhere; OpenMP execution is strictly
// opt-in via Exec::openmp(). Both paths produce bitwise-identical results:
// parallel loops only write disjoint slots, and reductions accumulate
// fixed-size chunks whose partial sums are combined in ascending chunk
// order, so the result never depends on the thread count.
struct Exec {
  bool parallel = false;
  int threads = 0;  // 0 = runtime default

  static Exec serial() { return Exec{}; }
  // Honors the CHCROSS_THREADS environment variable as an upper cap.
  static Exec openmp(int threads = 0);

  // Chunk size for deterministic reductions. Fixed: changing it changes the
  // rounding pattern of every norm, so it is part of the numeric contract,
  // not a tuning knob.
  static constexpr std::size_t kChunk = 1024;
};

// Resolved thread count for a policy (1 when serial or OpenMP is absent).
int resolved_threads(const Exec& ex);

// f(i) for i in [0, n). Iterations must be independent; under an OpenMP
// policy they are statically scheduled across resolved_threads(ex) threads.
template <class F>
void parallel_for(std::size_t n, const Exec& ex, F&& f) {
#ifdef _OPENMP
  if (ex.parallel && n > 1) {
    const int nt = resolved_threads(ex);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

// Deterministic sum of f(i) over i in [0, n). Chunk partials are formed
// independently (possibly in parallel) and combined in ascending chunk
// order, so serial and parallel results are bitwise identical.
template <class F>
double chunked_sum(std::size_t n, const Exec& ex, F&& f) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + Exec::kChunk - 1) / Exec::kChunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(nchunks, ex, [&](std::size_t c) {
    const std::size_t lo = c * Exec::kChunk;
    const std::size_t hi = lo + Exec::kChunk < n ? lo + Exec::kChunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[c] = s;
  });
  double total = 0.0;
  for (std::size_t c = 0; c < nchunks; ++c) total += partial[c];
  return total;
}

}  // namespace chcross
