#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace dncone {

// Every data-parallel kernel takes one of these. Execution::serial runs the
// plain loop and is the reference the OpenMP path is tested against; both
// produce identical results because work items are independent and results
// are stored by index.
enum class Execution { serial, parallel };

int max_threads() noexcept;
// Caps the OpenMP team size (the CLI --jobs flag). n <= 0 leaves it alone.
void set_max_threads(int n) noexcept;

// Runs fn(i) for i in [0, count). An exception thrown by any item is
// rethrown after the loop; when several items throw, the lowest index wins.
template <class Fn>
void for_each_index(std::size_t count, Fn&& fn, Execution exec = Execution::parallel) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dncone
