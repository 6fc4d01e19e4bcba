#pragma once

// Thread-count control and the fixed-order reductions the parallel kernels
// use. Work is always split into blocks whose boundaries depend only on the
// problem size, never on the number of threads, and block partials are
// combined in a fixed tree order. That makes every kernel's output
// bit-identical for 1..N workers.

#include <cstddef>
#include <span>

namespace fso {

/// Sets the OpenMP worker count for subsequent kernels (n >= 1).
void set_worker_count(int n);
int worker_count();

/// Pairwise (fixed binary-tree) sum of `values`.
double pairwise_sum(std::span<const double> values);

}  // namespace fso
