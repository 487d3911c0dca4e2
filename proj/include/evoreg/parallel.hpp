#pragma once

#include <cstddef>
#include <functional>

namespace evoreg {

/// Worker cap: EVOREG_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to `workers` threads.
/// Chunk boundaries depend only on n and workers; results must not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t workers = worker_count());

}  // namespace evoreg
