#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace embaudit::detail {

// Runs fn(begin, end) over disjoint chunks of [0, n). Workers only spawn
// when every one gets at least `min_chunk` items; results must not depend
// on the chunking.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t min_chunk, Fn&& fn) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(hw, min_chunk == 0 ? hw : n / min_chunk);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> threads;
  threads.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace embaudit::detail
