#pragma once

#include <functional>

namespace phasekit::detail {

// Worker count: PHASEKIT_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n) on contiguous static chunks. Each index is
// visited exactly once; callers write to disjoint slots and reduce serially
// afterwards, so results do not depend on the thread count.
void parallel_for(int n, const std::function<void(int)>& body);

} // namespace phasekit::detail
