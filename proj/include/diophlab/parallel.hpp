// Copyright 2026 The diophlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Deterministic fork/join helpers. Work is split into chunks whose
// boundaries depend only on the problem size, never on the worker count, and
// partial results are combined in chunk order, so every reduction produces
// bit-identical output for any number of threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace diophlab {

namespace detail {
inline std::atomic<unsigned>& thread_override() {
  static std::atomic<unsigned> value{0};
  return value;
}
}  // namespace detail

/// Worker count: an explicit override if set, else DIOPHLAB_THREADS, else
/// the hardware concurrency.
inline unsigned thread_count() {
  if (const unsigned o = detail::thread_override().load(); o != 0) return o;
  if (const char* env = std::getenv("DIOPHLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Overrides the worker count for this process; 0 restores the default.
inline void set_thread_count(unsigned n) { detail::thread_override().store(n); }

/// Calls fn(i) for i in [0, n) across the worker pool. Exceptions from any
/// call are rethrown (the one from the lowest index wins).
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Maps fn over [0, n) and returns the results in index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

/// Fixed chunking of [begin, end) into pieces of at most `chunk` items.
struct ChunkRange {
  std::size_t begin;
  std::size_t end;
};

inline std::vector<ChunkRange> fixed_chunks(std::size_t begin, std::size_t end, std::size_t chunk) {
  std::vector<ChunkRange> out;
  for (std::size_t b = begin; b < end; b += chunk) out.push_back({b, std::min(end, b + chunk)});
  return out;
}

}  // namespace diophlab
