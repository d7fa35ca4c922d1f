// include/pasr/ctc.hpp

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

#ifndef PASR_CTC_HPP_
#define PASR_CTC_HPP_

#include <Eigen/Core>
#include <vector>

namespace pasr {

// Rows are frames, columns are unnormalized per-token scores
// (column 0 = blank).
using LogitSequence = Eigen::MatrixXd;

struct CtcResult {
  double loss = 0.0;        // negative log likelihood over all alignments
  Eigen::MatrixXd grad;     // dloss/dlogits, same shape as the input
};

// [y_1, ..., y_C] -> [blank, y_1, blank, ..., blank, y_C, blank].
// Throws FeasibilityError if the label contains a blank or is empty.
std::vector<int> expand_label(const std::vector<int>& label);

// Fewest frames that admit an alignment: C plus one separating blank for
// each adjacent repeated token.
int min_frames_required(const std::vector<int>& label);

// Forward-backward in log space.  grad = softmax(logits) - per-frame symbol
// posterior, so every gradient row sums to zero.
// Throws FeasibilityError when T < min_frames_required(label).
CtcResult ctc_loss(const LogitSequence& logits, const std::vector<int>& label);

// Best-path decode: per-frame argmax (ties -> lowest id), collapse repeats,
// drop blanks.
std::vector<int> greedy_decode(const LogitSequence& logits);

}  // namespace pasr

#endif  // PASR_CTC_HPP_
