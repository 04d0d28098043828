#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace arden {

/// Worker count: ARDEN_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) across worker threads. Each index writes
/// only its own output slot, so results do not depend on scheduling. The
/// first exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace arden
