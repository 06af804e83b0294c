#pragma once

#include <cstddef>
#include <functional>

namespace gpsm {

/// Runs fn(0..count-1) across at most `threads` workers with a strided
/// schedule.  Item i always produces the same work regardless of the thread
/// count, so callers that write into slot i get bit-identical results in
/// parallel and serial runs.  The first exception thrown by any item is
/// rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace gpsm
