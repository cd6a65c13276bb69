//
// Copyright 2026 The invcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef INVCERT_PARALLEL_H_
#define INVCERT_PARALLEL_H_

#include <cstdint>
#include <functional>

namespace invcert {

// Number of worker threads used by ParallelFor (hardware concurrency, >= 1).
int WorkerCount();

// Calls body(begin, end) on disjoint contiguous ranges covering [0, count).
// The partition depends only on count and WorkerCount(), so results written
// by index are deterministic. The first exception thrown by any worker is
// rethrown after all workers finish.
void ParallelFor(int64_t count,
                 const std::function<void(int64_t begin, int64_t end)>& body);

}  // namespace invcert

#endif  // INVCERT_PARALLEL_H_
