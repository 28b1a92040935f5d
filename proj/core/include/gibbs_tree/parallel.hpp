#pragma once

#include <cstddef>
#include <functional>

namespace gibbs_tree {

/// Number of worker threads: GIBBS_TREE_THREADS if set to a positive
/// integer, otherwise std::thread::hardware_concurrency() (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads using a
/// static contiguous partition. body must only write to slots owned by i;
/// callers reduce results in index order afterwards.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gibbs_tree
