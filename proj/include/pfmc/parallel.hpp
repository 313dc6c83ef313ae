#pragma once

// Deterministic slab parallelism. Work is split into one contiguous range
// per worker; reductions fold the per-slab partials in slab order, so
// results are bit-identical for any worker count.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pfmc {

struct Range {
  std::int64_t begin = 0, end = 0;
};

inline std::vector<Range> slab_ranges(std::int64_t total, int workers) {
  if (workers < 1) throw std::invalid_argument("slab_ranges: workers must be >= 1");
  const int k = static_cast<int>(std::min<std::int64_t>(workers, std::max<std::int64_t>(total, 1)));
  std::vector<Range> out(k);
  const std::int64_t base = total / k, rem = total % k;
  std::int64_t at = 0;
  for (int i = 0; i < k; ++i) {
    const std::int64_t len = base + (i < rem ? 1 : 0);
    out[i] = {at, at + len};
    at += len;
  }
  return out;
}

inline void parallel_for(std::int64_t total, int workers,
                         const std::function<void(std::int64_t, std::int64_t)>& body) {
  const auto ranges = slab_ranges(total, workers);
  if (ranges.size() == 1) {
    body(ranges[0].begin, ranges[0].end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(ranges.size());
  for (const Range& r : ranges)
    pool.emplace_back([&body, r] { body(r.begin, r.end); });
  for (auto& th : pool) th.join();
}

// Sum reduction with slab-ordered deterministic fold.
inline double parallel_sum(std::int64_t total, int workers,
                           const std::function<double(std::int64_t, std::int64_t)>& partial) {
  const auto ranges = slab_ranges(total, workers);
  std::vector<double> parts(ranges.size(), 0.0);
  if (ranges.size() == 1) {
    parts[0] = partial(ranges[0].begin, ranges[0].end);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i)
      pool.emplace_back([&, i] { parts[i] = partial(ranges[i].begin, ranges[i].end); });
    for (auto& th : pool) th.join();
  }
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

}  // namespace pfmc
