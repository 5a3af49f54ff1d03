#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pklab {

// Deterministic reductions over index ranges.
//
// Every integral in this library is a weighted sum over quadrature nodes.
// To make results reproducible bit-for-bit across runs and thread counts,
// sums are evaluated as a fixed pairwise tree: the index range is cut into
// blocks of kReduceBlock, each block is accumulated left to right, and the
// block partials are folded pairwise. The tree depends only on the range
// length, never on the schedule, so the OpenMP kernel and the serial
// reference produce identical bits.

inline constexpr std::size_t kReduceBlock = 1024;

namespace detail {

inline double fold_pairwise(std::vector<double>& parts) {
  std::size_t len = parts.size();
  if (len == 0) return 0.0;
  while (len > 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i)
      parts[i] = parts[2 * i] + parts[2 * i + 1];
    if (len % 2 == 1) {
      parts[half] = parts[len - 1];
      len = half + 1;
    } else {
      len = half;
    }
  }
  return parts[0];
}

}  // namespace detail

/// Serial reference: fixed-block pairwise tree sum of term(i) for i in [0, count).
template <class Term>
double tree_sum_serial(std::size_t count, Term&& term) {
  if (count == 0) return 0.0;
  const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> parts(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * kReduceBlock;
    const std::size_t hi = lo + kReduceBlock < count ? lo + kReduceBlock : count;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    parts[b] = acc;
  }
  return detail::fold_pairwise(parts);
}

/// OpenMP kernel: same tree as tree_sum_serial, block partials in parallel.
template <class Term>
double tree_sum(std::size_t count, Term&& term) {
  if (count == 0) return 0.0;
  const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
  if (nblocks == 1) return tree_sum_serial(count, term);
  std::vector<double> parts(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t hi = lo + kReduceBlock < count ? lo + kReduceBlock : count;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    parts[static_cast<std::size_t>(b)] = acc;
  }
  return detail::fold_pairwise(parts);
}

/// Naive left-to-right sum; accuracy cross-check in tests only.
template <class Term>
double naive_sum(std::size_t count, Term&& term) {
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += term(i);
  return acc;
}

/// Applies the PKLAB_THREADS cap, if set. Call once at process start.
inline void apply_thread_cap_from_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("PKLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

}  // namespace pklab
