// src/eval.cc

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

#include "pasr/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "pasr/ctc.hpp"
#include "pasr/threading.hpp"
#include "pasr/vocab.hpp"

namespace pasr {

double Metrics::wer() const {
  if (n_ref_words == 0) return 0.0;
  return 100.0 * static_cast<double>(n_errors()) /
         static_cast<double>(n_ref_words);
}

void Metrics::merge(const Metrics& other) {
  n_sub += other.n_sub;
  n_ins += other.n_ins;
  n_del += other.n_del;
  n_utts += other.n_utts;
  n_ref_words += other.n_ref_words;
}

std::vector<std::vector<int>> split_words(const std::vector<int>& tokens) {
  std::vector<std::vector<int>> words;
  std::vector<int> cur;
  for (int id : tokens) {
    if (id == Vocabulary::kSpaceId) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(id);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

namespace {

Metrics score_pair(const std::vector<std::vector<int>>& ref,
                   const std::vector<std::vector<int>>& hyp) {
  const int R = static_cast<int>(ref.size());
  const int H = static_cast<int>(hyp.size());
  std::vector<std::vector<int>> cost(R + 1, std::vector<int>(H + 1, 0));
  for (int r = 0; r <= R; ++r) cost[r][0] = r;
  for (int h = 0; h <= H; ++h) cost[0][h] = h;
  for (int r = 1; r <= R; ++r) {
    for (int h = 1; h <= H; ++h) {
      const int diag = cost[r - 1][h - 1] + (ref[r - 1] == hyp[h - 1] ? 0 : 1);
      const int del = cost[r - 1][h] + 1;
      const int ins = cost[r][h - 1] + 1;
      cost[r][h] = std::min({diag, del, ins});
    }
  }
  Metrics m;
  m.n_utts = 1;
  m.n_ref_words = R;
  int r = R, h = H;
  while (r > 0 || h > 0) {
    if (r > 0 && h > 0 &&
        cost[r][h] == cost[r - 1][h - 1] + (ref[r - 1] == hyp[h - 1] ? 0 : 1)) {
      if (ref[r - 1] != hyp[h - 1]) ++m.n_sub;
      --r;
      --h;
    } else if (r > 0 && cost[r][h] == cost[r - 1][h] + 1) {
      ++m.n_del;
      --r;
    } else {
      ++m.n_ins;
      --h;
    }
  }
  return m;
}

}  // namespace

Metrics wer(const std::vector<std::vector<int>>& references,
            const std::vector<std::vector<int>>& hypotheses) {
  if (references.size() != hypotheses.size()) {
    throw ConfigError("wer: reference/hypothesis list length mismatch");
  }
  Metrics total;
  for (std::size_t i = 0; i < references.size(); ++i) {
    total.merge(score_pair(split_words(references[i]),
                           split_words(hypotheses[i])));
  }
  return total;
}

double relative_improvement(double base_wer, double now_wer) {
  if (base_wer <= 0.0) {
    throw ConfigError("relative_improvement: undefined for base WER <= 0");
  }
  return (base_wer - now_wer) / base_wer * 100.0;
}

Metrics evaluate(const AcousticModel& model, const Dataset& dataset,
                 EvalTrace* trace) {
  if (dataset.empty()) throw ConfigError("evaluate: empty dataset");
  const int n = static_cast<int>(dataset.size());
  std::vector<std::vector<int>> decodes(n);
  parallel_for(n, [&](int i) {
    decodes[i] = greedy_decode(model.forward(dataset.utts[i].frames));
  });
  Metrics total;
  for (int i = 0; i < n; ++i) {
    total.merge(score_pair(split_words(dataset.utts[i].transcript),
                           split_words(decodes[i])));
  }
  if (trace) trace->decodes = std::move(decodes);
  return total;
}

std::vector<TableRow> assemble_table(
    const std::vector<std::pair<std::string, Metrics>>& rows) {
  static const char* kCanonical[] = {
      "global",          "real-only",        "person-syn",
      "other-person-syn", "multi-person-syn", "global-text-syn",
      "global-interp"};
  const Metrics* global = nullptr;
  for (const auto& [name, m] : rows) {
    if (name == "global") {
      global = &m;
      break;
    }
  }
  if (!global) throw ConfigError("assemble_table: missing 'global' row");
  const double base = global->wer();

  std::vector<TableRow> out;
  auto emit = [&](const std::string& name, const Metrics& m) {
    TableRow row;
    row.condition = name;
    row.metrics = m;
    if (name != "global" && base > 0.0) {
      row.rel_improvement_vs_global = relative_improvement(base, m.wer());
    }
    out.push_back(std::move(row));
  };
  for (const char* name : kCanonical) {
    for (const auto& [n, m] : rows) {
      if (n == name) emit(n, m);
    }
  }
  for (const auto& [n, m] : rows) {
    if (std::find_if(out.begin(), out.end(), [&](const TableRow& r) {
          return r.condition == n;
        }) == out.end()) {
      emit(n, m);
    }
  }
  return out;
}

std::string format_table(const std::vector<TableRow>& rows) {
  std::size_t width = 9;
  for (const auto& r : rows) width = std::max(width, r.condition.size());
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-*s  %7s  %9s\n",
                static_cast<int>(width), "condition", "wer", "rel-gain");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s  %6.1f%%",
                  static_cast<int>(width), r.condition.c_str(),
                  r.metrics.wer());
    os << buf;
    if (r.rel_improvement_vs_global) {
      std::snprintf(buf, sizeof(buf), "  %8.1f%%",
                    *r.rel_improvement_vs_global);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pasr
