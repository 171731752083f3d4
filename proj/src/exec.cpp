#include "grandlux/exec.hpp"

#include <atomic>

namespace grandlux::exec {

namespace {
std::atomic<Mode> g_mode{Mode::Parallel};
}

Mode mode() noexcept { return g_mode.load(std::memory_order_relaxed); }

void set_mode(Mode m) noexcept { g_mode.store(m, std::memory_order_relaxed); }

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace grandlux::exec
