// src/trainer.cc

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

#include "pasr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pasr/ctc.hpp"
#include "pasr/eval.hpp"
#include "pasr/threading.hpp"

namespace pasr {

void TrainConfig::validate() const {
  if (learning_rate < 0.0) throw ConfigError("train: negative learning rate");
  if (batch_size < 1) throw ConfigError("train: batch size must be >= 1");
  if (max_epochs < 0) throw ConfigError("train: negative epoch limit");
  if (patience < 1) throw ConfigError("train: patience must be >= 1");
  if (lambda < 0.0 || lambda > 1.0) {
    throw ConfigError("train: lambda must lie in [0, 1]");
  }
}

std::pair<double, ParamVector> batch_loss(
    const AcousticModel& model, const std::vector<const Utterance*>& batch) {
  if (batch.empty()) throw ConfigError("batch_loss: empty batch");
  const int n = static_cast<int>(batch.size());
  std::vector<double> losses(n);
  std::vector<ParamVector> grads(n);
  std::vector<std::string> errors(n);
  parallel_for(n, [&](int i) {
    try {
      const Utterance& u = *batch[i];
      const LogitSequence logits = model.forward(u.frames);
      const CtcResult res = ctc_loss(logits, u.transcript);
      losses[i] = res.loss;
      grads[i] = model.backward(u.frames, res.grad);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      throw FeasibilityError("batch utterance " + std::to_string(i) +
                             " (speaker '" + batch[i]->speaker +
                             "'): " + errors[i]);
    }
  }
  double loss = 0.0;
  ParamVector grad = ParamVector::Zero(grads[0].size());
  for (int i = 0; i < n; ++i) {
    loss += losses[i];
    grad += grads[i];
  }
  const double inv = 1.0 / static_cast<double>(n);
  return {loss * inv, grad * inv};
}

namespace {

std::vector<const Utterance*> gather(const Dataset& d,
                                     const std::vector<int>& order,
                                     std::size_t begin, std::size_t end) {
  std::vector<const Utterance*> batch;
  batch.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) batch.push_back(&d.utts[order[i]]);
  return batch;
}

// Shuffled circular stream over dataset indices; reshuffles on wrap.
class IndexStream {
 public:
  IndexStream(std::size_t n, Rng rng) : order_(n), rng_(std::move(rng)) {
    std::iota(order_.begin(), order_.end(), 0);
    std::shuffle(order_.begin(), order_.end(), rng_);
  }

  int next() {
    if (pos_ == order_.size()) {
      std::shuffle(order_.begin(), order_.end(), rng_);
      pos_ = 0;
    }
    return order_[pos_++];
  }

 private:
  std::vector<int> order_;
  std::size_t pos_ = 0;
  Rng rng_;
};

void check_finite(double loss, int epoch) {
  if (!std::isfinite(loss)) {
    throw TrainError("training diverged (loss not finite) at epoch " +
                     std::to_string(epoch));
  }
}

}  // namespace

TrainReport train_global(AcousticModel& model, const Dataset& train,
                         const Dataset& val, const TrainConfig& config) {
  config.validate();
  if (train.empty() || val.empty()) {
    throw ConfigError("train_global: empty train or validation split");
  }
  Rng shuffle_rng = make_substream(config.seed, "train/shuffle");
  Optimizer opt(config.optimizer, config.learning_rate, config.beta1,
                config.beta2, config.eps);

  TrainReport report;
  report.val_wer.push_back(evaluate(model, val).wer());
  ParamVector best = model.flatten();
  double best_wer = report.val_wer[0];
  int bad_epochs = 0;

  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  ParamVector params = model.flatten();

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    long n_batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + config.batch_size);
      const auto [loss, grad] = batch_loss(model, gather(train, order, start, end));
      check_finite(loss, epoch);
      opt.step(params, grad);
      model.unflatten(params);
      model.enforce_mask();
      params = model.flatten();
      epoch_loss += loss;
      ++n_batches;
    }
    report.train_loss.push_back(epoch_loss / static_cast<double>(n_batches));
    report.val_wer.push_back(evaluate(model, val).wer());
    if (report.val_wer.back() < best_wer) {
      best_wer = report.val_wer.back();
      report.best_epoch = epoch;
      best = params;
      bad_epochs = 0;
    } else if (++bad_epochs >= config.patience) {
      break;
    }
  }
  model.unflatten(best);
  model.enforce_mask();
  return report;
}

TrainReport personalize(AcousticModel& model, const Dataset& person,
                        const Dataset& aux, const Dataset& person_val,
                        const TrainConfig& config,
                        const SelectionConfig* selection, SelectionLog* log) {
  config.validate();
  if (person.empty()) {
    throw ConfigError("personalize: empty personal training set");
  }
  if (person_val.empty()) {
    throw ConfigError("personalize: empty personal validation set");
  }
  // lambda == 0 or an empty pool disables the auxiliary term entirely, so
  // those runs replay the real-only trajectory bit for bit.
  const bool use_aux = !aux.empty() && config.lambda > 0.0;
  if (selection && !use_aux) {
    throw ConfigError("personalize: selection needs an active auxiliary pool");
  }

  IndexStream person_stream(
      person.size(), make_substream(config.seed, "personalize/shuffle/person"));
  Rng aux_rng = make_substream(config.seed, "personalize/shuffle/aux");
  Optimizer opt(config.optimizer, config.learning_rate, config.beta1,
                config.beta2, config.eps);

  TrainReport report;
  report.val_wer.push_back(evaluate(model, person_val).wer());
  ParamVector best = model.flatten();
  double best_wer = report.val_wer[0];
  int bad_epochs = 0;
  ParamVector params = model.flatten();

  std::vector<int> active(aux.size());
  std::iota(active.begin(), active.end(), 0);
  int round = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    if (selection && (epoch - 1) % selection->period == 0) {
      SelectionState state =
          run_selection_round(model, aux, person, person_val, *selection);
      active = state.selected;
      ++round;
      if (log) {
        SelectionRound rec;
        rec.round = round;
        rec.epoch = epoch;
        rec.k = static_cast<int>(state.selected.size());
        rec.scores = std::move(state.scores);
        rec.selected = state.selected;
        log->push_back(std::move(rec));
      }
    }

    const std::size_t epoch_units = use_aux ? active.size() : person.size();
    const long n_steps =
        (static_cast<long>(epoch_units) + config.batch_size - 1) /
        config.batch_size;
    std::vector<int> aux_order = active;
    if (use_aux) std::shuffle(aux_order.begin(), aux_order.end(), aux_rng);

    double epoch_loss = 0.0;
    std::size_t aux_pos = 0;
    for (long step = 0; step < n_steps; ++step) {
      std::vector<const Utterance*> person_batch;
      for (int b = 0; b < config.batch_size; ++b) {
        person_batch.push_back(&person.utts[person_stream.next()]);
      }
      const auto [lp, gp] = batch_loss(model, person_batch);
      double loss;
      ParamVector grad;
      if (use_aux) {
        const std::size_t aux_end =
            std::min(aux_order.size(), aux_pos + config.batch_size);
        const auto [la, ga] =
            batch_loss(model, gather(aux, aux_order, aux_pos, aux_end));
        aux_pos = aux_end;
        loss = (1.0 - config.lambda) * lp + config.lambda * la;
        grad = (1.0 - config.lambda) * gp + config.lambda * ga;
      } else {
        loss = lp;
        grad = gp;
      }
      check_finite(loss, epoch);
      opt.step(params, grad);
      model.unflatten(params);
      model.enforce_mask();
      params = model.flatten();
      epoch_loss += loss;
    }
    report.train_loss.push_back(epoch_loss / static_cast<double>(n_steps));
    report.val_wer.push_back(evaluate(model, person_val).wer());
    if (report.val_wer.back() < best_wer) {
      best_wer = report.val_wer.back();
      report.best_epoch = epoch;
      best = params;
      bad_epochs = 0;
    } else if (++bad_epochs >= config.patience) {
      break;
    }
  }
  model.unflatten(best);
  model.enforce_mask();
  return report;
}

}  // namespace pasr
