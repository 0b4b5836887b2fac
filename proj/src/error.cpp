#include "semimg/error.hpp"
#include "semimg/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace semimg {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::precondition: return "precondition";
    case ErrorCategory::singular: return "singular";
    case ErrorCategory::evaluation: return "evaluation";
    case ErrorCategory::convergence: return "convergence";
    case ErrorCategory::degenerate: return "degenerate";
    case ErrorCategory::internal: return "internal";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace semimg
