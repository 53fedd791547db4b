#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace edgepost::detail {

// Runs fn(i) for i in [0, count), striding the indices over `threads` workers.
// Each index is handled by exactly one worker, so results written per index do
// not depend on the thread count. The first exception is rethrown.
template <typename Fn>
void parallel_for(unsigned count, unsigned threads, Fn&& fn) {
  threads = std::clamp(threads, 1u, std::max(count, 1u));
  if (threads == 1) {
    for (unsigned i = 0; i < count; ++i) fn(0u, i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (unsigned i = w; i < count; i += threads) fn(w, i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace edgepost::detail
