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

namespace dabnet {

/// Asks the C allocator to keep freed blocks for reuse instead of returning
/// them to the OS. A forward pass allocates and frees tens of large
/// activations; without this every one of them is page-faulted in afresh.
/// Process-wide, so it is left to executables to call. No-op off glibc.
void keep_freed_memory();

}  // namespace dabnet
