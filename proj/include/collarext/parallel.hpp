#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace collarext {

/// Worker count: hardware concurrency, capped by COLLAREXT_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Callers
/// write results into per-index slots so the outcome does not depend on
/// scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Stateless 64-bit mix used to derive per-sample seeds from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace collarext
