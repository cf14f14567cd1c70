#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace tsvf::detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for every i in [begin, end), split into contiguous blocks
/// over `threads` workers. body must only write to slot i of its outputs.
template <typename Body>
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned threads, Body&& body) {
  const std::uint64_t n = end > begin ? end - begin : 0;
  const std::uint64_t workers = std::min<std::uint64_t>(resolve_threads(threads), n);
  if (workers <= 1) {
    for (std::uint64_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::uint64_t block = (n + workers - 1) / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = begin + w * block;
    const std::uint64_t hi = std::min(end, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::uint64_t i = lo; i < hi; ++i) body(i);
    });
  }
}

}  // namespace tsvf::detail
