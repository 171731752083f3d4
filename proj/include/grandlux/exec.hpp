#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace grandlux::exec {

// Execution mode for the data-parallel kernels (quadrature node fills,
// eps-grid sweeps, orbit sums over atoms). Every kernel writes each output
// slot from a pure function of its index and reduces serially afterwards,
// so Serial and Parallel produce bit-identical results.
enum class Mode { Serial, Parallel };

Mode mode() noexcept;
void set_mode(Mode m) noexcept;
int max_threads() noexcept;

template <class F>
inline void for_index_serial(std::size_t n, F&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <class F>
inline void for_index_parallel(std::size_t n, F&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    fn(static_cast<std::size_t>(i));
  }
#else
  for_index_serial(n, fn);
#endif
}

// Dispatch on the current mode. fn(i) must only write state owned by slot i.
template <class F>
inline void for_index(std::size_t n, F&& fn) {
  if (mode() == Mode::Parallel) {
    for_index_parallel(n, fn);
  } else {
    for_index_serial(n, fn);
  }
}

// Like for_index, but exceptions thrown by fn are captured and rethrown
// after the loop (exceptions must not escape an OpenMP region).
template <class F>
inline void for_index_capture(std::size_t n, F&& fn) {
  std::exception_ptr first{};
  bool failed = false;
  for_index(n, [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(grandlux_exec_capture)
#endif
      {
        if (!failed) {
          failed = true;
          first = std::current_exception();
        }
      }
    }
  });
  if (failed) std::rethrow_exception(first);
}

// Scoped mode switch, used by tests and the benchmark driver.
class ModeGuard {
 public:
  explicit ModeGuard(Mode m) : saved_(mode()) { set_mode(m); }
  ~ModeGuard() { set_mode(saved_); }
  ModeGuard(const ModeGuard&) = delete;
  ModeGuard& operator=(const ModeGuard&) = delete;

 private:
  Mode saved_;
};

}  // namespace grandlux::exec
