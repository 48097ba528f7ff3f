#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace cogl {

/// Runs body(0..count-1) over at most `jobs` worker threads. Each index is
/// processed exactly once; callers keep determinism by writing results into
/// per-index slots.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  std::atomic<int> next{0};
  workers.reserve(jobs);
  for (int t = 0; t < jobs; ++t)
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& w : workers) w.join();
}

}  // namespace cogl
