#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <type_traits>
#include <vector>

namespace sprkit {

inline std::size_t worker_count(std::size_t tasks) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(hw, tasks));
}

/// Splits [0, count) into contiguous chunks, runs fn(begin, end) for each on
/// its own thread and returns the results in chunk order. Results never
/// depend on the thread count as long as fn's output is an associative fold.
template <class Fn>
auto parallel_chunks(std::size_t count, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, std::size_t, std::size_t>;
  const std::size_t workers = worker_count(count);
  std::vector<Result> results(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  const std::size_t per = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * per);
    const std::size_t end = std::min(count, begin + per);
    threads.emplace_back([&, w, begin, end] {
      try {
        results[w] = fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

/// out[i] = fn(i) for i in [0, count), computed concurrently.
template <class Fn>
auto parallel_map(std::size_t count, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> out(count);
  parallel_chunks(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
    return 0;
  });
  return out;
}

}  // namespace sprkit
