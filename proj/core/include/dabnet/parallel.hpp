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

#pragma once

#include <cstdint>
#include <functional>

namespace dabnet {

/// Worker count used by the kernels. Defaults to the DAB_THREADS environment
/// variable, where 0 or unset means std::thread::hardware_concurrency().
int thread_count();
/// Overrides the worker cap for the rest of the process; 0 restores auto.
void set_thread_count(int threads);

/// Runs body(lo, hi) over disjoint chunks covering [begin, end). Chunks never
/// share an output element, so results do not depend on the worker count.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace dabnet
