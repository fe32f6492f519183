#pragma once

#include <cstddef>
#include <functional>

namespace spiraldim {

/// Worker count: SPIRALDIM_THREADS when set and positive, otherwise
/// std::thread::hardware_concurrency() (0 also means auto).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// is processed exactly once; the first exception is rethrown after all
/// workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace spiraldim
