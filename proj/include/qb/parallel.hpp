#pragma once

#include <cstddef>
#include <functional>

namespace qb {

/// Worker count: QB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t thread_count();

/// Runs task(i) for i in [0, count) on up to thread_count() threads. Tasks
/// write to disjoint outputs, so results do not depend on scheduling.
/// The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace qb
