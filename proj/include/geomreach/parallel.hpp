#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace geomreach {

// Worker count: set_thread_count() if called with n > 0, otherwise
// GEOMREACH_THREADS, otherwise hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Runs body(begin, end) over a fixed split of [0, n) into contiguous chunks.
// The split depends only on n, never on the thread count, so per-chunk
// results are reproducible.
void run_chunks(std::size_t n, std::size_t chunk_count,
                const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body);

inline std::size_t default_chunk_count(std::size_t n) {
  return n < 64 ? 1 : (n < 4096 ? 64 : 256);
}

// Chunked map followed by an in-order fold. combine must be a total-order
// min/max style reduction for results to be independent of scheduling.
template <class T, class ChunkFn, class Combine>
T parallel_reduce(std::size_t n, T identity, ChunkFn chunk_fn, Combine combine) {
  const std::size_t chunks = default_chunk_count(n);
  std::vector<T> partial(chunks, identity);
  run_chunks(n, chunks, [&](std::size_t c, std::size_t b, std::size_t e) { partial[c] = chunk_fn(b, e); });
  T acc = identity;
  for (auto& p : partial) acc = combine(acc, p);
  return acc;
}

template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
  run_chunks(n, default_chunk_count(n), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

}  // namespace geomreach
