#pragma once

#include <cstddef>
#include <functional>

namespace kohnbound {

/// Worker count: KOHNBOUND_THREADS when set (clamped to >= 1), otherwise
/// the machine parallelism.
std::size_t worker_count();

/// Splits [0, n) into fixed-size chunks and processes them on a transient
/// worker pool. Each chunk index is handed to exactly one worker, so
/// per-chunk outputs written into preallocated slots are independent of
/// the worker count; combining them in chunk order keeps results
/// bit-reproducible.
void parallel_chunks(
    std::size_t n, std::size_t chunk_size,
    const std::function<void(std::size_t chunk_index, std::size_t begin,
                             std::size_t end)>& body);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

/// Chunk size used by the samplers and integral assembly.
inline constexpr std::size_t kDefaultChunk = 4096;

}  // namespace kohnbound
