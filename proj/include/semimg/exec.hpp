#pragma once

#include <exception>

namespace semimg {

/// Selects the kernel variant. `serial` is the reference loop over cells;
/// `parallel` gathers per row under OpenMP. Both accumulate contributions in
/// ascending cell order, so they agree bit for bit.
enum class Exec { serial, parallel };

/// Number of OpenMP threads available to parallel kernels (1 without OpenMP).
int max_threads();

/// Caps the OpenMP thread count; no-op without OpenMP.
void set_threads(int n);

/// OpenMP loop over [0, n). The first exception thrown by any iteration is
/// rethrown on the calling thread once the loop has finished.
template <class Body>
void parallel_for(int n, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(semimg_parallel_for_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace semimg
