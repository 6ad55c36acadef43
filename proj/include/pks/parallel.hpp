#ifndef PKS_PARALLEL_HPP
#define PKS_PARALLEL_HPP

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pks::par {

// Worker cap: min(omp_get_max_threads(), PKS_THREADS). 1 without OpenMP.
int thread_count();

// Loops below this trip count are not worth forking for.
inline constexpr std::size_t kParallelCutoff = 4096;

template <class Fn>
void parallel_for(std::size_t n, Fn&& body) {
#ifdef _OPENMP
  if (n >= kParallelCutoff && thread_count() > 1) {
#pragma omp parallel for schedule(static) num_threads(pks::par::thread_count())
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

namespace detail {
// Kahan accumulator; fixed evaluation order within a chunk.
struct kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};
}  // namespace detail

// Deterministic compensated reduction: the index range is split into a fixed
// number of chunks (independent of the thread count), each chunk is summed
// with Kahan compensation in index order, and the chunk partials are combined
// serially. Identical results for any PKS_THREADS setting.
template <class Term>
double sum(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  constexpr std::size_t kChunks = 256;
  if (n < kParallelCutoff) {
    detail::kahan acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(term(i));
    return acc.s;
  }
  std::vector<double> partial(kChunks, 0.0);
  const std::size_t step = (n + kChunks - 1) / kChunks;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(pks::par::thread_count())
#endif
  for (long long ci = 0; ci < static_cast<long long>(kChunks); ++ci) {
    const std::size_t lo = static_cast<std::size_t>(ci) * step;
    const std::size_t hi = lo + step < n ? lo + step : n;
    detail::kahan acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
    partial[static_cast<std::size_t>(ci)] = acc.s;
  }
  detail::kahan total;
  for (double p : partial) total.add(p);
  return total.s;
}

}  // namespace pks::par

#endif
