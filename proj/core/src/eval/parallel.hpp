#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace cnlwiki::eval::detail {

// Runs body(i) for i in [0, n) on all cores.
template <typename Body>
void parallelFor(std::size_t n, Body&& body) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, n));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace cnlwiki::eval::detail
