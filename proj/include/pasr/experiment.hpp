// include/pasr/experiment.hpp

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

#ifndef PASR_EXPERIMENT_HPP_
#define PASR_EXPERIMENT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pasr/eval.hpp"
#include "pasr/pruner.hpp"
#include "pasr/selector.hpp"
#include "pasr/trainer.hpp"
#include "pasr/world.hpp"

namespace pasr {

inline constexpr const char* kPasrVersion = "0.1.0";

// Full run description.  Every field has a default, so an empty JSON object
// is a valid config; unknown keys are rejected to catch typos.
struct ExperimentConfig {
  WorldConfig world;
  ModelDims model;
  TrainConfig train_global{
      .learning_rate = 5e-3, .max_epochs = 40, .patience = 8};
  TrainConfig personalize{
      .learning_rate = 2e-3, .max_epochs = 40, .patience = 8, .lambda = 0.6};
  double eta = 0.5;   // synthesis style-estimation fidelity
  int n_syn = 200;    // synthetic utterances per adaptation set
  SelectionConfig selection;
  PruneSchedule prune;
  std::string preset = "table1";
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string out_dir;

  static ExperimentConfig defaults();
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;  // effective config, defaults filled in
  void validate() const;
};

// Hex FNV-1a of the effective config; stable under key reordering of the
// source file because hashing runs over the canonical re-serialization.
std::string config_hash(const ExperimentConfig& config);

struct RunManifest {
  std::string config_hash;
  std::string version = kPasrVersion;
  std::string created;  // wall-clock timestamp; never copied into CSVs
  std::vector<std::string> artifacts;
  std::vector<std::pair<std::string, double>> timings_s;

  nlohmann::json to_json() const;
};

struct ResultRow {
  std::string experiment;
  int category = 0;
  std::string condition;
  std::uint64_t seed = 0;
  Metrics metrics;
  std::optional<double> rel_vs_global;
  std::optional<double> sparsity;        // capacity preset
  std::optional<long> effective_params;  // capacity preset
  std::optional<double> val_wer;         // gradmatch preset
};

struct PersonData {
  Dataset train, val, test;
};

// Per-seed cache of the expensive artifacts (world, rendered datasets,
// trained global model), shared by every condition of a preset and reusable
// across presets run in the same process.
class ExperimentSession {
 public:
  struct SeedState {
    World world;
    Dataset global_train, global_val;
    AcousticModel global_model{ModelDims{}};
    TrainReport global_report;
    std::map<std::string, PersonData> person;
  };

  explicit ExperimentSession(const ExperimentConfig& config);

  SeedState& state(std::uint64_t seed);
  PersonData& person(std::uint64_t seed, const std::string& speaker_id);
  const ExperimentConfig& config() const { return config_; }

 private:
  ExperimentConfig config_;
  std::map<std::uint64_t, SeedState> cache_;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::string results_csv;
  std::string summary_csv;
  RunManifest manifest;
};

// Runs the configured preset over all seeds.  When out_dir is set, writes
// results.csv, summary.csv, manifest.json and any selection traces there.
// A caller-owned session lets several presets share cached global models.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                ExperimentSession* session = nullptr);

std::string results_to_csv(const std::string& preset,
                           const std::vector<ResultRow>& rows);
std::string summarize_to_csv(const std::string& preset,
                             const std::vector<ResultRow>& rows);

}  // namespace pasr

#endif  // PASR_EXPERIMENT_HPP_
