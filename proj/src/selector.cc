// src/selector.cc

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

#include "pasr/selector.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pasr/threading.hpp"
#include "pasr/trainer.hpp"

namespace pasr {

std::string to_string(GradScope s) {
  switch (s) {
    case GradScope::kFull: return "full";
    case GradScope::kLastLayer: return "last-layer";
  }
  throw ConfigError("unknown gradient scope");
}

GradScope grad_scope_from_string(const std::string& s) {
  if (s == "full") return GradScope::kFull;
  if (s == "last-layer") return GradScope::kLastLayer;
  throw ConfigError("unknown gradient scope '" + s + "'");
}

int SelectionConfig::resolve_k(int pool_size) const {
  if (k > 0) return k;
  return std::max(1, pool_size / 4);
}

void SelectionConfig::validate() const {
  if (k < 0) throw ConfigError("selection: k must be nonnegative");
  if (period < 1) throw ConfigError("selection: period must be >= 1");
}

ParamVector val_gradient(const AcousticModel& model, const Dataset& val) {
  if (val.empty()) {
    throw SelectionError("val_gradient: empty validation set");
  }
  std::vector<const Utterance*> all;
  all.reserve(val.size());
  for (const auto& u : val.utts) all.push_back(&u);
  return batch_loss(model, all).second;
}

ParamVector candidate_gradient(const AcousticModel& model, const Utterance& d,
                               const ParamVector& person_mean_grad) {
  const ParamVector g = batch_loss(model, {&d}).second;
  return 0.5 * g + 0.5 * person_mean_grad;
}

ParamVector candidate_gradient(const AcousticModel& model, const Utterance& d,
                               const Dataset& person) {
  return candidate_gradient(model, d, val_gradient(model, person));
}

std::vector<int> select_topk(const ParamVector& g_val,
                             const std::vector<ParamVector>& candidates,
                             int k, std::vector<double>* scores_out) {
  const double val_norm = g_val.norm();
  if (!(val_norm > 0.0)) {
    throw SelectionError("select_topk: zero validation gradient");
  }
  const int n = static_cast<int>(candidates.size());
  if (k < 1 || k > n) {
    throw SelectionError("select_topk: k must lie in [1, pool size]");
  }
  std::vector<double> scores(n);
  for (int i = 0; i < n; ++i) {
    if (candidates[i].size() != g_val.size()) {
      throw SelectionError("select_topk: gradient length mismatch");
    }
    const double c_norm = candidates[i].norm();
    scores[i] = c_norm > 0.0
                    ? g_val.dot(candidates[i]) / (val_norm * c_norm)
                    : -std::numeric_limits<double>::infinity();
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  order.resize(k);
  if (scores_out) *scores_out = std::move(scores);
  return order;
}

SelectionState run_selection_round(const AcousticModel& model,
                                   const Dataset& pool,
                                   const Dataset& d_person,
                                   const Dataset& d_person_val,
                                   const SelectionConfig& config) {
  config.validate();
  if (pool.empty()) throw SelectionError("selection: empty candidate pool");
  const int n = static_cast<int>(pool.size());
  const int k = config.resolve_k(n);
  if (k > n) throw SelectionError("selection: k exceeds pool size");

  SelectionState state;
  state.g_val = val_gradient(model, d_person_val);
  const ParamVector person_mean = val_gradient(model, d_person);

  std::vector<ParamVector> grads(n);
  std::vector<std::string> errors(n);
  parallel_for(n, [&](int i) {
    try {
      grads[i] = candidate_gradient(model, pool.utts[i], person_mean);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      throw SelectionError("selection candidate " + std::to_string(i) + ": " +
                           errors[i]);
    }
  }

  if (config.scope == GradScope::kLastLayer) {
    const auto [start, len] = model.last_layer_span();
    state.g_val = state.g_val.segment(start, len).eval();
    for (auto& g : grads) g = g.segment(start, len).eval();
  }

  state.selected = select_topk(state.g_val, grads, k, &state.scores);
  std::sort(state.selected.begin(), state.selected.end());
  return state;
}

}  // namespace pasr
