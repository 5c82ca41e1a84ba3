#pragma once

#include <cstddef>
#include <functional>

namespace ghostfem {

/// Worker count: GHOSTFEM_THREADS if set and positive, else the hardware
/// concurrency, never more than `jobs`.
int sweep_threads(std::size_t jobs);

/// Calls fn(i) for i in [0, count) on sweep_threads(count) workers. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace ghostfem
