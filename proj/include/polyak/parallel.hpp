// Copyright 2026 The Polyak Authors.
//
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

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace polyak {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(0), ..., fn(workers-1); worker 0 runs on the calling thread.
// The first exception thrown by any worker is rethrown after all join.
template <class Fn>
void run_workers(int workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(workers);
  auto guarded = [&](int id) {
    try {
      fn(id);
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  std::vector<std::jthread> threads;
  for (int id = 1; id < workers; ++id) threads.emplace_back(guarded, id);
  guarded(0);
  threads.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace polyak
