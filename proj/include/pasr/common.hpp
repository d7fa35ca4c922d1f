// include/pasr/common.hpp

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

#ifndef PASR_COMMON_HPP_
#define PASR_COMMON_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pasr {

// Thrown for invalid configuration (bad thresholds, malformed config files,
// unknown variants).  The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an optimization loop fails at runtime (divergence, infeasible
// utterance inside a batch).  The CLI maps this to exit code 3.
struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Label/frame-count combination admits no CTC alignment.  The renderer
// guarantees feasibility, so seeing this on generated data indicates a bug.
struct FeasibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Style estimation cannot proceed (e.g. oracle mode without ground truth).
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degenerate selection state (zero validation gradient).
struct SelectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double log_sum_exp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-(a > b ? a - b : b - a)));
}

inline double log_sum_exp(double a, double b, double c) {
  return log_sum_exp(log_sum_exp(a, b), c);
}

using Rng = std::mt19937_64;

// FNV-1a; fixed across platforms, unlike std::hash.
std::uint64_t fnv1a_hash(std::string_view s);

// Every random draw in the project flows from one root seed through named
// substreams, so components can be re-run in isolation without disturbing
// each other's streams.
std::uint64_t substream_seed(std::uint64_t root, std::string_view name);
Rng make_substream(std::uint64_t root, std::string_view name);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace pasr

#endif  // PASR_COMMON_HPP_
