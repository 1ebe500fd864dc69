// SPDX-License-Identifier: Apache-2.0
#include "hstokes/parallel.hpp"

#include <omp.h>

namespace hstokes {

namespace {
int g_workers = 0;
}

void set_worker_count(int n) { g_workers = n > 0 ? n : 0; }

int worker_count() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

namespace detail {

void run_parallel(std::ptrdiff_t n, void (*thunk)(void*, std::ptrdiff_t), void* ctx) {
  const int threads = worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) thunk(ctx, i);
}

}  // namespace detail
}  // namespace hstokes
