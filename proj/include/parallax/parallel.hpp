/*
 * Copyright 2026 The Parallax Blur Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PARALLAX_PARALLEL_HPP_
#define PARALLAX_PARALLEL_HPP_

#include <functional>

namespace parallax {

// Process-wide worker count used by parallel_for. Defaults to the hardware
// concurrency. Results of every operation in this library are independent of
// this value.
void set_thread_count(int threads);
int thread_count();

// Splits [begin, end) into contiguous blocks, one per worker, and calls
// body(block_begin, block_end) for each. Blocks must write disjoint outputs.
void parallel_for(int begin, int end,
                  const std::function<void(int, int)>& body);

}  // namespace parallax

#endif  // PARALLAX_PARALLEL_HPP_
