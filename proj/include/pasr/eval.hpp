// include/pasr/eval.hpp

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

#ifndef PASR_EVAL_HPP_
#define PASR_EVAL_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pasr/model.hpp"
#include "pasr/world.hpp"

namespace pasr {

// Corpus-level error counts.  wer() pools substitutions, insertions and
// deletions over all pairs, so merging two Metrics and recomputing gives the
// same value as scoring the concatenated corpus.
struct Metrics {
  long n_sub = 0;
  long n_ins = 0;
  long n_del = 0;
  long n_utts = 0;
  long n_ref_words = 0;

  long n_errors() const { return n_sub + n_ins + n_del; }
  double wer() const;
  void merge(const Metrics& other);
};

// A word is a maximal run of non-space token ids.
std::vector<std::vector<int>> split_words(const std::vector<int>& tokens);

// Word-level Levenshtein with unit costs, pooled over all pairs.  The
// backtrace prefers diagonal moves, then deletions, then insertions, which
// fixes the S/I/D split when several alignments share the minimal cost.
Metrics wer(const std::vector<std::vector<int>>& references,
            const std::vector<std::vector<int>>& hypotheses);

// (base - now) / base * 100.  Negative when now is worse.
double relative_improvement(double base_wer, double now_wer);

struct EvalTrace {
  std::vector<std::vector<int>> decodes;  // token ids per utterance
};

Metrics evaluate(const AcousticModel& model, const Dataset& dataset,
                 EvalTrace* trace = nullptr);

struct TableRow {
  std::string condition;
  Metrics metrics;
  std::optional<double> rel_improvement_vs_global;
};

// Orders known conditions canonically (Global first, then the adaptation
// variants); unknown names follow in input order.  Relative improvement is
// measured against the Global row.
std::vector<TableRow> assemble_table(
    const std::vector<std::pair<std::string, Metrics>>& rows);

// Plain-text rendering with WER at one decimal place.
std::string format_table(const std::vector<TableRow>& rows);

}  // namespace pasr

#endif  // PASR_EVAL_HPP_
