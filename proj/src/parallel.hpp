#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sphframe::detail {

// Splits [0, count) into contiguous chunks, one per hardware thread. `fn(begin, end)` must
// only write to state owned by its own index range.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t min_chunk = 4096) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, std::max<std::size_t>(1, count / min_chunk));
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t step = (count + workers - 1) / workers;
  for (std::size_t begin = 0; begin < count; begin += step)
    pool.emplace_back([&fn, begin, end = std::min(count, begin + step)] { fn(begin, end); });
}

}  // namespace sphframe::detail
