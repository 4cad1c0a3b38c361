#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace qtk::detail {

// Below this many work items the loop runs on the calling thread.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

/// Calls fn(begin, end) over disjoint chunks of [0, n). Chunks never share an
/// index, so results do not depend on scheduling as long as fn only writes
/// state owned by its own indices.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t hw = std::max(1U, std::thread::hardware_concurrency());
  if (n < kParallelThreshold || hw == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(hw, n / (kParallelThreshold / 4));
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin < end) pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace qtk::detail
