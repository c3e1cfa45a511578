#include "hgnn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace hgnn {
namespace {
std::atomic<unsigned> g_threads{1};
// Below this many rows threading costs more than it saves.
constexpr std::size_t kMinRowsPerThread = 256;
}  // namespace

void set_num_threads(unsigned n) { g_threads.store(std::max(1u, n)); }

unsigned num_threads() noexcept { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  std::size_t workers = std::min<std::size_t>(num_threads(), n / kMinRowsPerThread);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(n, chunk));
}

}  // namespace hgnn
