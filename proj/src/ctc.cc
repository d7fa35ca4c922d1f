// src/ctc.cc

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

#include "pasr/ctc.hpp"

#include <cmath>
#include <string>

#include "pasr/common.hpp"
#include "pasr/vocab.hpp"

namespace pasr {

std::vector<int> expand_label(const std::vector<int>& label) {
  if (label.empty()) {
    throw FeasibilityError("ctc: empty label");
  }
  std::vector<int> expanded;
  expanded.reserve(2 * label.size() + 1);
  expanded.push_back(Vocabulary::kBlankId);
  for (int y : label) {
    if (y == Vocabulary::kBlankId) {
      throw FeasibilityError("ctc: blank inside label");
    }
    expanded.push_back(y);
    expanded.push_back(Vocabulary::kBlankId);
  }
  return expanded;
}

int min_frames_required(const std::vector<int>& label) {
  int repeats = 0;
  for (std::size_t i = 1; i < label.size(); ++i) {
    if (label[i] == label[i - 1]) ++repeats;
  }
  return static_cast<int>(label.size()) + repeats;
}

CtcResult ctc_loss(const LogitSequence& logits, const std::vector<int>& label) {
  const auto expanded = expand_label(label);  // also validates the label
  const int T = static_cast<int>(logits.rows());
  const int V = static_cast<int>(logits.cols());
  const int S = static_cast<int>(expanded.size());

  const int min_t = min_frames_required(label);
  if (T < min_t) {
    throw FeasibilityError("ctc: " + std::to_string(T) +
                           " frames cannot align a label needing " +
                           std::to_string(min_t));
  }

  // Per-frame log softmax.
  Eigen::MatrixXd logp(T, V);
  for (int t = 0; t < T; ++t) {
    const double m = logits.row(t).maxCoeff();
    const double lse = m + std::log((logits.row(t).array() - m).exp().sum());
    logp.row(t) = logits.row(t).array() - lse;
  }

  // A transition may skip the previous blank when the symbol differs from
  // the one two positions back.
  auto can_skip = [&](int s) {
    return s >= 2 && expanded[s] != Vocabulary::kBlankId &&
           expanded[s] != expanded[s - 2];
  };

  Eigen::MatrixXd alpha = Eigen::MatrixXd::Constant(T, S, kLogZero);
  alpha(0, 0) = logp(0, expanded[0]);
  if (S > 1) alpha(0, 1) = logp(0, expanded[1]);
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = log_sum_exp(a, alpha(t - 1, s - 1));
      if (can_skip(s)) a = log_sum_exp(a, alpha(t - 1, s - 2));
      if (a != kLogZero) alpha(t, s) = a + logp(t, expanded[s]);
    }
  }

  // The frame-count check above guarantees a feasible path, so with finite
  // logits log_lik is finite.  Non-finite logits (a diverged model) flow
  // through as a non-finite loss for the caller to classify.
  const double log_lik =
      S > 1 ? log_sum_exp(alpha(T - 1, S - 1), alpha(T - 1, S - 2))
            : alpha(T - 1, S - 1);

  Eigen::MatrixXd beta = Eigen::MatrixXd::Constant(T, S, kLogZero);
  beta(T - 1, S - 1) = logp(T - 1, expanded[S - 1]);
  if (S > 1) beta(T - 1, S - 2) = logp(T - 1, expanded[S - 2]);
  for (int t = T - 2; t >= 0; --t) {
    for (int s = S - 1; s >= 0; --s) {
      double b = beta(t + 1, s);
      if (s + 1 < S) b = log_sum_exp(b, beta(t + 1, s + 1));
      if (s + 2 < S && can_skip(s + 2)) b = log_sum_exp(b, beta(t + 1, s + 2));
      if (b != kLogZero) beta(t, s) = b + logp(t, expanded[s]);
    }
  }

  CtcResult result;
  result.loss = -log_lik;
  result.grad.resize(T, V);
  for (int t = 0; t < T; ++t) {
    // gamma(t,s) = log P(paths through state s at frame t); the extra
    // logp term is double-counted by alpha*beta and divided back out.
    Eigen::VectorXd posterior = Eigen::VectorXd::Zero(V);
    for (int s = 0; s < S; ++s) {
      const double g = alpha(t, s) + beta(t, s) - logp(t, expanded[s]);
      if (g != kLogZero) {
        posterior[expanded[s]] += std::exp(g - log_lik);
      }
    }
    result.grad.row(t) = logp.row(t).array().exp() - posterior.transpose().array();
  }
  return result;
}

std::vector<int> greedy_decode(const LogitSequence& logits) {
  std::vector<int> out;
  int prev = -1;
  for (int t = 0; t < logits.rows(); ++t) {
    int best = 0;
    for (int v = 1; v < logits.cols(); ++v) {
      if (logits(t, v) > logits(t, best)) best = v;  // ties keep lowest id
    }
    if (best != prev && best != Vocabulary::kBlankId) {
      out.push_back(best);
    }
    prev = best;
  }
  return out;
}

}  // namespace pasr
