#pragma once

#include <cstddef>
#include <functional>

namespace hgnn {

/// Number of worker threads used by row-parallel kernels. Defaults to 1.
/// Kernels partition work by output row, so results do not depend on this value.
void set_num_threads(unsigned n);
unsigned num_threads() noexcept;

/// Runs body(begin, end) over contiguous chunks of [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace hgnn
