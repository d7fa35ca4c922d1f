// src/pruner.cc

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

#include "pasr/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace pasr {

void PruneSchedule::validate() const {
  if (sparsities.empty()) throw ConfigError("prune: empty schedule");
  double prev = -1.0;
  for (double s : sparsities) {
    if (s < 0.0 || s >= 1.0) {
      throw ConfigError("prune: sparsity targets must lie in [0, 1)");
    }
    if (s <= prev) {
      throw ConfigError("prune: sparsity targets must increase strictly");
    }
    prev = s;
  }
  if (finetune_epochs < 0) {
    throw ConfigError("prune: negative fine-tune epochs");
  }
}

void magnitude_prune(AcousticModel& model, double target_sparsity) {
  if (target_sparsity < 0.0 || target_sparsity >= 1.0) {
    throw ConfigError("prune: target sparsity must lie in [0, 1)");
  }
  const long n_w = model.dims().n_weights();
  const long want_zeros =
      static_cast<long>(std::floor(target_sparsity * static_cast<double>(n_w)));

  PruneMask mask;
  if (model.mask()) {
    mask = *model.mask();
  } else {
    mask.keep.assign(n_w, true);
  }
  const long have_zeros = mask.n_zeros();
  if (want_zeros < have_zeros) {
    throw ConfigError("prune: target sparsity below current sparsity");
  }
  if (want_zeros > have_zeros) {
    const Eigen::VectorXd w = model.weight_vector();
    std::vector<long> unmasked;
    unmasked.reserve(n_w - have_zeros);
    for (long i = 0; i < n_w; ++i) {
      if (mask.keep[i]) unmasked.push_back(i);
    }
    // |w| ascending, flat index breaking ties.
    std::stable_sort(unmasked.begin(), unmasked.end(), [&](long a, long b) {
      const double ma = std::abs(w[a]), mb = std::abs(w[b]);
      if (ma != mb) return ma < mb;
      return a < b;
    });
    for (long i = 0; i < want_zeros - have_zeros; ++i) {
      mask.keep[unmasked[i]] = false;
    }
  }
  model.apply_mask(mask);
}

std::vector<PruneStage> prune_and_finetune(const AcousticModel& model,
                                           const PruneSchedule& schedule,
                                           const Dataset& train,
                                           const Dataset& val,
                                           const TrainConfig& config) {
  schedule.validate();
  TrainConfig stage_config = config;
  stage_config.max_epochs = schedule.finetune_epochs;

  std::vector<PruneStage> stages;
  AcousticModel current = model;
  for (double target : schedule.sparsities) {
    magnitude_prune(current, target);
    PruneStage stage;
    stage.target_sparsity = target;
    stage.report = train_global(current, train, val, stage_config);
    stage.achieved_sparsity =
        static_cast<double>(current.mask()->n_zeros()) /
        static_cast<double>(current.dims().n_weights());
    stage.effective_params = current.effective_params();
    stage.model = current;
    stages.push_back(std::move(stage));
  }
  return stages;
}

}  // namespace pasr
