// core/include/tristou/parallel.hpp

// Copyright 2026  Tristou Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TRISTOU_PARALLEL_HPP
#define TRISTOU_PARALLEL_HPP

#include <functional>

namespace tristou {

// Runs fn(i) for i in [0, n) across up to `workers` threads with a static
// block partition. Each index is processed exactly once by exactly one
// thread, so results written to per-index slots are identical for any worker
// count. The first exception thrown by any worker is rethrown to the caller.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace tristou

#endif  // TRISTOU_PARALLEL_HPP
