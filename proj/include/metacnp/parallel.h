// Copyright 2026 The metacnp Authors.
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

// Task-level parallel loops. Every parallel kernel in the library runs its
// work items through ParallelFor, which has an OpenMP path and a plain
// serial path. Work items write only to their own output slot and results
// are reduced in index order afterwards, so both paths give bitwise
// identical results; the serial path is the reference the tests compare
// against.

#ifndef METACNP_PARALLEL_H_
#define METACNP_PARALLEL_H_

#include <exception>
#include <vector>

namespace metacnp {

enum class ExecutionMode { kSerial, kParallel };

// kSerial when UMCNP_DETERMINISTIC=1 is set or only one thread is
// configured, else kParallel.
ExecutionMode DefaultExecutionMode();

// Sets the OpenMP worker count (n <= 0 keeps the runtime default) and pins
// Eigen to one thread so parallelism stays at the task level.
void ConfigureThreads(int n);
int ThreadCount();

template <typename Fn>
void ParallelFor(int n, ExecutionMode mode, Fn&& fn) {
  if (mode == ExecutionMode::kSerial || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace metacnp

#endif  // METACNP_PARALLEL_H_
