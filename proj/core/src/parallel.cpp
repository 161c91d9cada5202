/* Copyright 2026 The dabnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dabnet/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dabnet {
namespace {

int env_threads() {
  const char* raw = std::getenv("DAB_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || v < 0) return 0;
  return static_cast<int>(std::min<long>(v, 1024));
}

int resolve(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& configured() {
  static std::atomic<int> threads{env_threads()};
  return threads;
}

}  // namespace

int thread_count() { return resolve(configured().load(std::memory_order_relaxed)); }

void set_thread_count(int threads) { configured().store(std::max(threads, 0)); }

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
  const std::int64_t total = end - begin;
  if (total <= 0) return;
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(thread_count(), total));
  if (workers <= 1) {
    body(begin, end);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&](std::int64_t lo, std::int64_t hi) {
    try {
      body(lo, hi);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  const std::int64_t chunk = total / workers;
  const std::int64_t extra = total % workers;
  std::int64_t lo = begin;
  for (std::int64_t i = 0; i < workers; ++i) {
    const std::int64_t hi = lo + chunk + (i < extra ? 1 : 0);
    if (i + 1 == workers) {
      run(lo, hi);
    } else {
      pool.emplace_back(run, lo, hi);
    }
    lo = hi;
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dabnet
