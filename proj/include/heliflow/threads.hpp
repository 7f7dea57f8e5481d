#pragma once
#include <cstddef>
#include <functional>

namespace heliflow {

// Width of data-parallel loops; HELIFLOW_THREADS caps it, default = all cores.
int thread_width();

// Static-chunk parallel for over [0, n). Falls back to serial when width==1
// or the range is small.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace heliflow
