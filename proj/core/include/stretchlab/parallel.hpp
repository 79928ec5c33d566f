#ifndef STRETCHLAB_PARALLEL_HPP
#define STRETCHLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace stretchlab {

/// Run body(0..n-1) across threads. Results must go to disjoint slots so the
/// output is independent of the schedule. The first exception thrown by a body
/// is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace stretchlab

#endif
