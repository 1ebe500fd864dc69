// SPDX-License-Identifier: Apache-2.0
//
// Index loops with a serial reference path and an OpenMP path. Each index
// writes only its own output slot, so both paths give bitwise-identical results.
#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace hstokes {

enum class Execution { serial, parallel };

/// Thread count used by Execution::parallel (0 keeps the OpenMP default).
void set_worker_count(int n);
int worker_count();

namespace detail {
void run_parallel(std::ptrdiff_t n, void (*thunk)(void*, std::ptrdiff_t), void* ctx);
}

/// Calls fn(i) for i in [0, n). Exceptions are collected and the one thrown by
/// the lowest index is rethrown after the loop, independent of scheduling.
template <class F>
void for_each_index(std::size_t n, Execution exec, F&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](std::ptrdiff_t i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) body(static_cast<std::ptrdiff_t>(i));
  } else {
    using Body = decltype(body);
    detail::run_parallel(static_cast<std::ptrdiff_t>(n),
                         [](void* ctx, std::ptrdiff_t i) { (*static_cast<Body*>(ctx))(i); }, &body);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace hstokes
