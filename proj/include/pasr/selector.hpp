// include/pasr/selector.hpp

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

#ifndef PASR_SELECTOR_HPP_
#define PASR_SELECTOR_HPP_

#include <vector>

#include "pasr/model.hpp"
#include "pasr/world.hpp"

namespace pasr {

enum class GradScope { kFull, kLastLayer };

std::string to_string(GradScope s);
GradScope grad_scope_from_string(const std::string& s);

struct SelectionConfig {
  int k = 0;       // 0 resolves to 25% of the pool (at least 1)
  int period = 2;  // epochs between re-selections
  GradScope scope = GradScope::kFull;

  int resolve_k(int pool_size) const;
  void validate() const;
};

struct SelectionState {
  ParamVector g_val;
  std::vector<double> scores;  // cosine(G_val, G_d) per candidate
  std::vector<int> selected;   // ascending candidate indices, size k
};

// One audit record per re-selection.
struct SelectionRound {
  int round = 0;
  int epoch = 0;
  int k = 0;
  std::vector<double> scores;
  std::vector<int> selected;
};

using SelectionLog = std::vector<SelectionRound>;

// Mean CTC gradient over the personal validation set at the current
// parameters.
ParamVector val_gradient(const AcousticModel& model, const Dataset& val);

// One half candidate gradient, one half personal-set mean gradient.  The
// personal term is candidate-independent; run_selection_round precomputes
// it once per round and passes it in.  The Dataset overload recomputes the
// personal term from scratch.
ParamVector candidate_gradient(const AcousticModel& model, const Utterance& d,
                               const ParamVector& person_mean_grad);
ParamVector candidate_gradient(const AcousticModel& model, const Utterance& d,
                               const Dataset& person);

// Indices of the k best candidates by cosine similarity against g_val, in
// descending score order.  Ties break toward the lower index; zero-norm
// candidates score -inf and rank last.  scores_out, when given, receives
// every candidate's score.
std::vector<int> select_topk(const ParamVector& g_val,
                             const std::vector<ParamVector>& candidates,
                             int k, std::vector<double>* scores_out = nullptr);

SelectionState run_selection_round(const AcousticModel& model,
                                   const Dataset& pool,
                                   const Dataset& d_person,
                                   const Dataset& d_person_val,
                                   const SelectionConfig& config);

}  // namespace pasr

#endif  // PASR_SELECTOR_HPP_
