#ifndef VASC_PARALLEL_HPP
#define VASC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace vasc {

/// Process-wide worker count for internal loop parallelism. 0 = hardware default.
/// Results of every library operation are independent of this setting.
void set_thread_count(int n);
int thread_count();

/// Static-partition parallel loop over [begin, end). Each index must write only
/// its own outputs; partitioning is deterministic but irrelevant to results.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& fn);

} // namespace vasc

#endif
