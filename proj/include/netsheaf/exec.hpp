// Parallel reduction kernels used by the hot loops (consistency radius pair
// sums, sup-norm scans, exhaustive candidate argmin). Each kernel has a plain
// serial twin in netsheaf::reference; tests assert the two agree bit-for-bit
// and tools/bench_kernels.cpp times them against each other.
//
// Determinism: with ExecPolicy::deterministic (the default) the sum kernel
// buffers all terms and accumulates them in index order, so the result does
// not depend on the thread count. max/argmin are exact under reordering
// anyway (argmin ties break toward the smallest index in both paths).
#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netsheaf {

struct ExecPolicy {
  int threads = 1;            // 1 = serial, 0 = runtime default, n = cap at n
  bool deterministic = true;  // fixed-order accumulation for sums
};

namespace detail {

inline int resolve_threads(const ExecPolicy& exec) {
#ifdef _OPENMP
  if (exec.threads == 0) return omp_get_max_threads();
  return exec.threads < 1 ? 1 : exec.threads;
#else
  (void)exec;
  return 1;
#endif
}

}  // namespace detail

namespace reference {

// Serial baselines. Kept deliberately free of pragmas so they double as the
// ground truth in tests and the baseline lane in the benchmark.

template <class Term>
double sum_terms(std::size_t n, Term&& term) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += term(i);
  return acc;
}

template <class Term>
double max_terms(std::size_t n, Term&& term) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = term(i);
    if (i == 0 || v > best) best = v;
  }
  return best;
}

template <class Term>
std::pair<std::size_t, double> argmin_terms(std::size_t n, Term&& term) {
  std::size_t at = static_cast<std::size_t>(-1);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double v = term(i);
    if (v < best) {
      best = v;
      at = i;
    }
  }
  return {at, best};
}

}  // namespace reference

// Sum of term(i) for i in [0, n). Deterministic mode fills a buffer in
// parallel and accumulates serially in index order.
template <class Term>
double sum_terms(std::size_t n, Term&& term, const ExecPolicy& exec = {}) {
  const int threads = detail::resolve_threads(exec);
  if (threads <= 1 || n < 2) return reference::sum_terms(n, term);
#ifdef _OPENMP
  if (exec.deterministic) {
    std::vector<double> buf(n);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      buf[static_cast<std::size_t>(i)] = term(static_cast<std::size_t>(i));
    double acc = 0.0;
    for (double v : buf) acc += v;
    return acc;
  }
  double acc = 0.0;
#pragma omp parallel for schedule(static) num_threads(threads) reduction(+ : acc)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    acc += term(static_cast<std::size_t>(i));
  return acc;
#else
  return reference::sum_terms(n, term);
#endif
}

// Max of term(i) over [0, n); returns 0 for n == 0 (callers treat an empty
// scan as "no gap found").
template <class Term>
double max_terms(std::size_t n, Term&& term, const ExecPolicy& exec = {}) {
  const int threads = detail::resolve_threads(exec);
  if (threads <= 1 || n < 2) return reference::max_terms(n, term);
#ifdef _OPENMP
  double best = -std::numeric_limits<double>::infinity();
#pragma omp parallel num_threads(threads)
  {
    double local = -std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      double v = term(static_cast<std::size_t>(i));
      if (v > local) local = v;
    }
#pragma omp critical
    if (local > best) best = local;
  }
  return n == 0 ? 0.0 : best;
#else
  return reference::max_terms(n, term);
#endif
}

// Argmin of term(i) over [0, n); ties go to the smallest index, so the result
// matches the serial reference for any thread count. Returns {npos, +inf}
// when n == 0.
template <class Term>
std::pair<std::size_t, double> argmin_terms(std::size_t n, Term&& term,
                                            const ExecPolicy& exec = {}) {
  const int threads = detail::resolve_threads(exec);
  if (threads <= 1 || n < 2) return reference::argmin_terms(n, term);
#ifdef _OPENMP
  std::size_t at = static_cast<std::size_t>(-1);
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel num_threads(threads)
  {
    std::size_t lat = static_cast<std::size_t>(-1);
    double lbest = std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      double v = term(static_cast<std::size_t>(i));
      if (v < lbest || (v == lbest && static_cast<std::size_t>(i) < lat)) {
        lbest = v;
        lat = static_cast<std::size_t>(i);
      }
    }
#pragma omp critical
    if (lbest < best || (lbest == best && lat < at)) {
      best = lbest;
      at = lat;
    }
  }
  return {at, best};
#else
  return reference::argmin_terms(n, term);
#endif
}

}  // namespace netsheaf
