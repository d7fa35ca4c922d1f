// include/pasr/pruner.hpp

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

#ifndef PASR_PRUNER_HPP_
#define PASR_PRUNER_HPP_

#include <vector>

#include "pasr/model.hpp"
#include "pasr/trainer.hpp"

namespace pasr {

struct PruneSchedule {
  std::vector<double> sparsities = {0.0, 0.3, 0.5, 0.7, 0.85};
  int finetune_epochs = 3;

  void validate() const;  // strictly increasing, in [0, 1)
};

struct PruneStage {
  double target_sparsity = 0.0;
  double achieved_sparsity = 0.0;
  long effective_params = 0;
  AcousticModel model{ModelDims{}};
  TrainReport report;
};

// Zeroes the smallest-magnitude unmasked weights of W1 and W2 (global rank,
// biases exempt) until exactly floor(target * n_weights) weights are masked.
// Masks are cumulative; a target below the current sparsity is an error.
void magnitude_prune(AcousticModel& model, double target_sparsity);

// Alternates magnitude_prune with recovery fine-tuning on the global data,
// returning one checkpoint per schedule stage.
std::vector<PruneStage> prune_and_finetune(const AcousticModel& model,
                                           const PruneSchedule& schedule,
                                           const Dataset& train,
                                           const Dataset& val,
                                           const TrainConfig& config);

}  // namespace pasr

#endif  // PASR_PRUNER_HPP_
