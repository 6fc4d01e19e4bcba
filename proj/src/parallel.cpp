#include "fso/parallel.hpp"

#include "fso/error.hpp"

#include <omp.h>

namespace fso {

void set_worker_count(int n) {
  if (n < 1) throw DomainError("worker count must be >= 1");
  omp_set_num_threads(n);
}

int worker_count() { return omp_get_max_threads(); }

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace fso
