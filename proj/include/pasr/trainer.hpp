// include/pasr/trainer.hpp

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

#ifndef PASR_TRAINER_HPP_
#define PASR_TRAINER_HPP_

#include <utility>
#include <vector>

#include "pasr/model.hpp"
#include "pasr/optim.hpp"
#include "pasr/selector.hpp"
#include "pasr/world.hpp"

namespace pasr {

struct TrainConfig {
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int batch_size = 8;
  int max_epochs = 30;
  int patience = 5;
  double lambda = 0.5;  // auxiliary-loss weight during personalization
  std::uint64_t seed = 0;

  void validate() const;
};

// val_wer has one entry per recorded epoch including epoch 0 (the model
// before any update), so best_epoch == 0 means training never improved on
// the starting point and the input model is returned unchanged.
struct TrainReport {
  std::vector<double> train_loss;  // one per completed training epoch
  std::vector<double> val_wer;     // train_loss.size() + 1 entries
  int best_epoch = 0;

  double best_val_wer() const { return val_wer.at(best_epoch); }
};

// Mean CTC loss and mean parameter gradient over the batch, accumulated in
// input order.
std::pair<double, ParamVector> batch_loss(
    const AcousticModel& model, const std::vector<const Utterance*>& batch);

// Mini-batch training on train with early stopping on val WER.  Honors an
// existing prune mask.
TrainReport train_global(AcousticModel& model, const Dataset& train,
                         const Dataset& val, const TrainConfig& config);

// Fine-tuning with the per-step mixed loss
//   (1 - lambda) * L(person batch) + lambda * L(aux batch).
// The aux term is dropped entirely when aux is empty or lambda == 0, which
// makes those runs bit-identical to real-only fine-tuning.  When selection
// is given, the active aux subset is re-chosen from the full pool every
// `period` epochs; rounds are appended to log when provided.
TrainReport personalize(AcousticModel& model, const Dataset& person,
                        const Dataset& aux, const Dataset& person_val,
                        const TrainConfig& config,
                        const SelectionConfig* selection = nullptr,
                        SelectionLog* log = nullptr);

}  // namespace pasr

#endif  // PASR_TRAINER_HPP_
