#pragma once

#include <cstddef>
#include <functional>

namespace spectral {

/// Worker cap from SPECTRAL_TRANSPORT_THREADS (0 or unset = hardware auto).
int worker_count();

/// Runs fn(i) for i in [0, n) across at most worker_count() threads.
/// Iterations must be independent; results land in caller-owned slots, so
/// the outcome is deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace spectral
