/*
 * Copyright 2026 The monokurt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cstddef>
#include <functional>

namespace monokurt {

/// Worker count used when none is given: the MONOKURT_THREADS environment
/// variable if it holds a positive integer, otherwise the hardware concurrency.
unsigned default_thread_count();

/// Calls fn(i) for every i in [0, count) using up to `threads` workers
/// (0 selects default_thread_count()). Each index runs exactly once; callers
/// store results by index so the outcome does not depend on scheduling. If any
/// call throws, every index still runs and the exception from the smallest
/// failing index is rethrown afterwards, so errors are deterministic too.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace monokurt
