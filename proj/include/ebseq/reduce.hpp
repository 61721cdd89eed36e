#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ebseq {

// Compensated (Kahan) accumulator.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

inline constexpr std::size_t reduce_chunk = 4096;

// Sum of f(0..n-1) in fixed 4096-element chunks, each chunk Kahan-compensated,
// chunks combined left to right.  The grouping depends only on n, never on
// thread count, so results are identical under any parallel schedule that
// preserves per-chunk evaluation (we only ever parallelise at coarser
// granularity anyway).
template <class F>
double chunked_sum(std::size_t n, F&& f) {
  KahanSum outer;
  for (std::size_t start = 0; start < n; start += reduce_chunk) {
    const std::size_t stop = std::min(n, start + reduce_chunk);
    KahanSum inner;
    for (std::size_t i = start; i < stop; ++i) inner.add(f(i));
    outer.add(inner.value());
  }
  return outer.value();
}

inline double chunked_sum(std::span<const double> values) {
  return chunked_sum(values.size(), [&](std::size_t i) { return values[i]; });
}

// Worker count for replicate-level parallelism: EBSEQ_WORKERS if set,
// otherwise hardware concurrency.
int resolve_worker_count();

// Runs fn(i) for i in [0, count) on up to `workers` threads.  Work items must
// be independent; writes go to per-index slots.
void parallel_for(long count, int workers, const std::function<void(long)>& fn);

}  // namespace ebseq
