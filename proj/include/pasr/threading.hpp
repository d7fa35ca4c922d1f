// include/pasr/threading.hpp

// Copyright 2026  The pasr authors

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

#ifndef PASR_THREADING_HPP_
#define PASR_THREADING_HPP_

#include <functional>

namespace pasr {

// Worker count for parallel_for.  0 or 1 means sequential.  The initial
// value comes from the PASR_THREADS environment variable when set.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n).  Each index writes only its own output slot,
// so results are bit-identical for any thread count; callers do any
// cross-index reduction sequentially afterwards.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace pasr

#endif  // PASR_THREADING_HPP_
