// src/experiment.cc

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

#include "pasr/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <set>
#include <sstream>

#include "pasr/io.hpp"

namespace pasr {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& known,
                const std::string& section) {
  if (!j.is_object()) {
    throw ConfigError("config section '" + section + "' must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("config: unknown key '" + key + "' in section '" +
                        section + "'");
    }
  }
}

template <typename T>
void read_field(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

WorldConfig parse_world(const json& j) {
  check_keys(j, {"feat_dim", "n_global_speakers", "speakers_per_category",
                 "global_words", "target_words", "word_len_min", "word_len_max",
                 "sent_len_min", "sent_len_max", "domain_overlap",
                 "near_style_radius", "far_style_radius",
                 "transform_scale_near", "transform_scale_far",
                 "max_condition_number", "tempo_min", "tempo_max",
                 "tempo_min_far", "tempo_max_far", "tempo_jitter",
                 "noise_sigma", "person_frame_budget", "person_val_utts",
                 "person_test_utts", "global_train_utts", "global_val_utts"},
             "world");
  WorldConfig c;
  read_field(j, "feat_dim", &c.feat_dim);
  read_field(j, "n_global_speakers", &c.n_global_speakers);
  read_field(j, "speakers_per_category", &c.speakers_per_category);
  read_field(j, "global_words", &c.global_words);
  read_field(j, "target_words", &c.target_words);
  read_field(j, "word_len_min", &c.word_len_min);
  read_field(j, "word_len_max", &c.word_len_max);
  read_field(j, "sent_len_min", &c.sent_len_min);
  read_field(j, "sent_len_max", &c.sent_len_max);
  read_field(j, "domain_overlap", &c.domain_overlap);
  read_field(j, "near_style_radius", &c.near_style_radius);
  read_field(j, "far_style_radius", &c.far_style_radius);
  read_field(j, "transform_scale_near", &c.transform_scale_near);
  read_field(j, "transform_scale_far", &c.transform_scale_far);
  read_field(j, "max_condition_number", &c.max_condition_number);
  read_field(j, "tempo_min", &c.tempo_min);
  read_field(j, "tempo_max", &c.tempo_max);
  read_field(j, "tempo_min_far", &c.tempo_min_far);
  read_field(j, "tempo_max_far", &c.tempo_max_far);
  read_field(j, "tempo_jitter", &c.tempo_jitter);
  read_field(j, "noise_sigma", &c.noise_sigma);
  read_field(j, "person_frame_budget", &c.person_frame_budget);
  read_field(j, "person_val_utts", &c.person_val_utts);
  read_field(j, "person_test_utts", &c.person_test_utts);
  read_field(j, "global_train_utts", &c.global_train_utts);
  read_field(j, "global_val_utts", &c.global_val_utts);
  return c;
}

json world_to_json(const WorldConfig& c) {
  return json{{"feat_dim", c.feat_dim},
              {"n_global_speakers", c.n_global_speakers},
              {"speakers_per_category", c.speakers_per_category},
              {"global_words", c.global_words},
              {"target_words", c.target_words},
              {"word_len_min", c.word_len_min},
              {"word_len_max", c.word_len_max},
              {"sent_len_min", c.sent_len_min},
              {"sent_len_max", c.sent_len_max},
              {"domain_overlap", c.domain_overlap},
              {"near_style_radius", c.near_style_radius},
              {"far_style_radius", c.far_style_radius},
              {"transform_scale_near", c.transform_scale_near},
              {"transform_scale_far", c.transform_scale_far},
              {"max_condition_number", c.max_condition_number},
              {"tempo_min", c.tempo_min},
              {"tempo_max", c.tempo_max},
              {"tempo_min_far", c.tempo_min_far},
              {"tempo_max_far", c.tempo_max_far},
              {"tempo_jitter", c.tempo_jitter},
              {"noise_sigma", c.noise_sigma},
              {"person_frame_budget", c.person_frame_budget},
              {"person_val_utts", c.person_val_utts},
              {"person_test_utts", c.person_test_utts},
              {"global_train_utts", c.global_train_utts},
              {"global_val_utts", c.global_val_utts}};
}

TrainConfig parse_train(const json& j, const std::string& section) {
  check_keys(j, {"learning_rate", "optimizer", "beta1", "beta2", "eps",
                 "batch_size", "max_epochs", "patience", "lambda"},
             section);
  TrainConfig c;
  read_field(j, "learning_rate", &c.learning_rate);
  if (j.contains("optimizer")) {
    c.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
  }
  read_field(j, "beta1", &c.beta1);
  read_field(j, "beta2", &c.beta2);
  read_field(j, "eps", &c.eps);
  read_field(j, "batch_size", &c.batch_size);
  read_field(j, "max_epochs", &c.max_epochs);
  read_field(j, "patience", &c.patience);
  read_field(j, "lambda", &c.lambda);
  return c;
}

json train_to_json(const TrainConfig& c) {
  return json{{"learning_rate", c.learning_rate},
              {"optimizer", to_string(c.optimizer)},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"eps", c.eps},
              {"batch_size", c.batch_size},
              {"max_epochs", c.max_epochs},
              {"patience", c.patience},
              {"lambda", c.lambda}};
}

const std::vector<std::string> kTable1Conditions = {"global", "real-only",
                                                    "person-syn"};
const std::vector<std::string> kTable2Conditions = {
    "global",           "real-only",       "person-syn", "other-person-syn",
    "multi-person-syn", "global-text-syn", "global-interp"};

struct Cell {
  Metrics test;
  double val_wer = 0.0;
};

Dataset build_aux(const ExperimentConfig& cfg, ExperimentSession& session,
                  std::uint64_t seed, ExperimentSession::SeedState& st,
                  const SpeakerSpec& target, const Dataset& person_train,
                  Variant variant) {
  Rng rng =
      make_substream(seed, "syn/" + to_string(variant) + "/" + target.id);
  const Dataset* other = nullptr;
  if (variant == Variant::kOtherPersonSyn) {
    const SpeakerSpec& o = nearest_other_target(st.world, target);
    other = &session.person(seed, o.id).train;
  }
  return build_adaptation_set(variant, st.world, target, person_train,
                              st.global_train, other, cfg.n_syn, cfg.eta, rng);
}

// Runs one (speaker, condition) cell against the given base model.
Cell run_cell(const ExperimentConfig& cfg, ExperimentSession& session,
              std::uint64_t seed, ExperimentSession::SeedState& st,
              const SpeakerSpec& target, PersonData& pd,
              const std::string& condition, const AcousticModel& base,
              const SelectionConfig* sel, SelectionLog* log) {
  if (condition == "global") {
    return {evaluate(base, pd.test), evaluate(base, pd.val).wer()};
  }
  AcousticModel model = base;
  TrainConfig pc = cfg.personalize;
  pc.seed = seed;
  Dataset aux;
  if (condition != "real-only") {
    aux = build_aux(cfg, session, seed, st, target, pd.train,
                    variant_from_string(condition));
  }
  const TrainReport report =
      personalize(model, pd.train, aux, pd.val, pc, sel, log);
  return {evaluate(model, pd.test), report.best_val_wer()};
}

struct PresetOutput {
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, SelectionLog>> selection_logs;
};

void append_category_rows(const ExperimentConfig& cfg, std::uint64_t seed,
                          int category,
                          const std::vector<std::pair<std::string, Cell>>& cells,
                          std::vector<ResultRow>* rows,
                          std::optional<double> sparsity = std::nullopt,
                          std::optional<long> effective_params = std::nullopt,
                          bool with_val_wer = false) {
  double base_wer = -1.0;
  for (const auto& [cond, cell] : cells) {
    if (cond == "global") base_wer = cell.test.wer();
  }
  for (const auto& [cond, cell] : cells) {
    ResultRow row;
    row.experiment = cfg.preset;
    row.category = category;
    row.condition = cond;
    row.seed = seed;
    row.metrics = cell.test;
    if (cond != "global" && base_wer > 0.0) {
      row.rel_vs_global = relative_improvement(base_wer, cell.test.wer());
    }
    row.sparsity = sparsity;
    row.effective_params = effective_params;
    if (with_val_wer) row.val_wer = cell.val_wer;
    rows->push_back(std::move(row));
  }
}

PresetOutput run_table_preset(const ExperimentConfig& cfg,
                              ExperimentSession& session,
                              const std::vector<std::string>& conditions) {
  PresetOutput out;
  for (std::uint64_t seed : cfg.seeds) {
    auto& st = session.state(seed);
    for (int cat = 1; cat <= 4; ++cat) {
      std::vector<std::pair<std::string, Cell>> cells;
      for (const auto& cond : conditions) {
        Cell pooled;
        double val_sum = 0.0;
        for (int j = 0; j < cfg.world.speakers_per_category; ++j) {
          const SpeakerSpec& target = st.world.target(cat, j);
          PersonData& pd = session.person(seed, target.id);
          Cell c = run_cell(cfg, session, seed, st, target, pd, cond,
                            st.global_model, nullptr, nullptr);
          pooled.test.merge(c.test);
          val_sum += c.val_wer;
        }
        pooled.val_wer = val_sum / cfg.world.speakers_per_category;
        cells.emplace_back(cond, std::move(pooled));
      }
      append_category_rows(cfg, seed, cat, cells, &out.rows);
    }
  }
  return out;
}

PresetOutput run_capacity_preset(const ExperimentConfig& cfg,
                                 ExperimentSession& session) {
  PresetOutput out;
  for (std::uint64_t seed : cfg.seeds) {
    auto& st = session.state(seed);
    TrainConfig tg = cfg.train_global;
    tg.seed = seed;
    const auto stages = prune_and_finetune(st.global_model, cfg.prune,
                                           st.global_train, st.global_val, tg);
    for (const auto& stage : stages) {
      std::vector<std::pair<std::string, Cell>> cells;
      for (const std::string cond : {"global", "person-syn"}) {
        Cell pooled;
        double val_sum = 0.0;
        for (int j = 0; j < cfg.world.speakers_per_category; ++j) {
          const SpeakerSpec& target = st.world.target(1, j);
          PersonData& pd = session.person(seed, target.id);
          Cell c = run_cell(cfg, session, seed, st, target, pd, cond,
                            stage.model, nullptr, nullptr);
          pooled.test.merge(c.test);
          val_sum += c.val_wer;
        }
        pooled.val_wer = val_sum / cfg.world.speakers_per_category;
        cells.emplace_back(cond, std::move(pooled));
      }
      append_category_rows(cfg, seed, 1, cells, &out.rows,
                           stage.target_sparsity, stage.effective_params);
    }
  }
  return out;
}

PresetOutput run_gradmatch_preset(const ExperimentConfig& cfg,
                                  ExperimentSession& session) {
  PresetOutput out;
  for (std::uint64_t seed : cfg.seeds) {
    auto& st = session.state(seed);
    std::vector<std::pair<std::string, Cell>> cells;
    std::array<const char*, 3> conds = {"global", "person-syn",
                                        "person-syn+select"};
    for (const char* cond_name : conds) {
      const bool with_sel = std::string(cond_name) == "person-syn+select";
      const std::string cell_cond = with_sel ? "person-syn" : cond_name;
      Cell pooled;
      double val_sum = 0.0;
      for (int j = 0; j < cfg.world.speakers_per_category; ++j) {
        const SpeakerSpec& target = st.world.target(4, j);
        PersonData& pd = session.person(seed, target.id);
        SelectionLog log;
        Cell c = run_cell(cfg, session, seed, st, target, pd, cell_cond,
                          st.global_model, with_sel ? &cfg.selection : nullptr,
                          with_sel ? &log : nullptr);
        if (with_sel) {
          out.selection_logs.emplace_back(
              "selection_seed" + std::to_string(seed) + "_" + target.id +
                  ".jsonl",
              std::move(log));
        }
        pooled.test.merge(c.test);
        val_sum += c.val_wer;
      }
      pooled.val_wer = val_sum / cfg.world.speakers_per_category;
      cells.emplace_back(cond_name, std::move(pooled));
    }
    append_category_rows(cfg, seed, 4, cells, &out.rows, std::nullopt,
                         std::nullopt, /*with_val_wer=*/true);
  }
  return out;
}

std::string timestamp_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  check_keys(j, {"world", "model", "train_global", "personalize", "synthesis",
                 "selection", "prune", "experiment"},
             "top level");
  ExperimentConfig c;
  if (j.contains("world")) c.world = parse_world(j.at("world"));
  if (j.contains("model")) {
    const json& m = j.at("model");
    check_keys(m, {"context_radius", "hidden"}, "model");
    read_field(m, "context_radius", &c.model.context_radius);
    read_field(m, "hidden", &c.model.hidden);
  }
  if (j.contains("train_global")) {
    c.train_global = parse_train(j.at("train_global"), "train_global");
  }
  if (j.contains("personalize")) {
    c.personalize = parse_train(j.at("personalize"), "personalize");
  }
  if (j.contains("synthesis")) {
    const json& s = j.at("synthesis");
    check_keys(s, {"eta", "n_syn"}, "synthesis");
    read_field(s, "eta", &c.eta);
    read_field(s, "n_syn", &c.n_syn);
  }
  if (j.contains("selection")) {
    const json& s = j.at("selection");
    check_keys(s, {"k", "period", "scope"}, "selection");
    read_field(s, "k", &c.selection.k);
    read_field(s, "period", &c.selection.period);
    if (s.contains("scope")) {
      c.selection.scope =
          grad_scope_from_string(s.at("scope").get<std::string>());
    }
  }
  if (j.contains("prune")) {
    const json& p = j.at("prune");
    check_keys(p, {"sparsities", "finetune_epochs"}, "prune");
    read_field(p, "sparsities", &c.prune.sparsities);
    read_field(p, "finetune_epochs", &c.prune.finetune_epochs);
  }
  if (j.contains("experiment")) {
    const json& e = j.at("experiment");
    check_keys(e, {"preset", "seeds", "out_dir"}, "experiment");
    read_field(e, "preset", &c.preset);
    read_field(e, "seeds", &c.seeds);
    read_field(e, "out_dir", &c.out_dir);
  }
  // The model always speaks the world's feature and output alphabets.
  c.model.feat_dim = c.world.feat_dim;
  c.model.n_outputs = Vocabulary().size();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["world"] = world_to_json(world);
  j["model"] =
      json{{"context_radius", model.context_radius}, {"hidden", model.hidden}};
  j["train_global"] = train_to_json(train_global);
  j["personalize"] = train_to_json(personalize);
  j["synthesis"] = json{{"eta", eta}, {"n_syn", n_syn}};
  j["selection"] = json{{"k", selection.k},
                        {"period", selection.period},
                        {"scope", to_string(selection.scope)}};
  j["prune"] = json{{"sparsities", prune.sparsities},
                    {"finetune_epochs", prune.finetune_epochs}};
  j["experiment"] =
      json{{"preset", preset}, {"seeds", seeds}, {"out_dir", out_dir}};
  return j;
}

void ExperimentConfig::validate() const {
  world.validate();
  train_global.validate();
  personalize.validate();
  selection.validate();
  prune.validate();
  if (model.feat_dim != world.feat_dim) {
    throw ConfigError("config: model feature dim disagrees with world");
  }
  if (eta < 0.0) throw ConfigError("config: eta must be nonnegative");
  if (n_syn < 1) throw ConfigError("config: n_syn must be >= 1");
  if (preset != "table1" && preset != "table2" && preset != "capacity" &&
      preset != "gradmatch") {
    throw ConfigError("config: unknown preset '" + preset + "'");
  }
  if (seeds.empty()) throw ConfigError("config: seed list empty");
}

std::string config_hash(const ExperimentConfig& config) {
  const std::uint64_t h = fnv1a_hash(config.to_json().dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

json RunManifest::to_json() const {
  json timings = json::object();
  for (const auto& [name, secs] : timings_s) timings[name] = secs;
  return json{{"config_hash", config_hash},
              {"version", version},
              {"created", created},
              {"artifacts", artifacts},
              {"timings_s", timings}};
}

ExperimentSession::ExperimentSession(const ExperimentConfig& config)
    : config_(config) {
  config_.validate();
}

ExperimentSession::SeedState& ExperimentSession::state(std::uint64_t seed) {
  auto it = cache_.find(seed);
  if (it != cache_.end()) return it->second;

  SeedState st;
  st.world = build_world(config_.world, seed);
  {
    Rng rng = make_substream(seed, "data/global-train");
    st.global_train = make_global_dataset(
        st.world, config_.world.global_train_utts, Split::kTrain, rng);
  }
  {
    Rng rng = make_substream(seed, "data/global-val");
    st.global_val = make_global_dataset(
        st.world, config_.world.global_val_utts, Split::kVal, rng);
  }
  st.global_model = AcousticModel::init(seed, config_.model);
  TrainConfig tg = config_.train_global;
  tg.seed = seed;
  st.global_report =
      train_global(st.global_model, st.global_train, st.global_val, tg);
  return cache_.emplace(seed, std::move(st)).first->second;
}

PersonData& ExperimentSession::person(std::uint64_t seed,
                                      const std::string& speaker_id) {
  SeedState& st = state(seed);
  auto it = st.person.find(speaker_id);
  if (it != st.person.end()) return it->second;

  const SpeakerSpec* spec = st.world.find_speaker(speaker_id);
  if (!spec || spec->category == 0) {
    throw ConfigError("session: '" + speaker_id + "' is not a target speaker");
  }
  PersonData pd;
  {
    Rng rng = make_substream(seed, "data/person/" + speaker_id + "/train");
    pd.train = make_budgeted_dataset(st.world, *spec,
                                     config_.world.person_frame_budget, rng);
  }
  {
    Rng rng = make_substream(seed, "data/person/" + speaker_id + "/val");
    pd.val = make_counted_dataset(st.world, *spec,
                                  config_.world.person_val_utts, Split::kVal,
                                  rng);
  }
  {
    Rng rng = make_substream(seed, "data/person/" + speaker_id + "/test");
    pd.test = make_counted_dataset(st.world, *spec,
                                   config_.world.person_test_utts,
                                   Split::kTest, rng);
  }
  return st.person.emplace(speaker_id, std::move(pd)).first->second;
}

std::string results_to_csv(const std::string& preset,
                           const std::vector<ResultRow>& rows) {
  const bool capacity = preset == "capacity";
  const bool gradmatch = preset == "gradmatch";
  std::ostringstream os;
  os << "experiment,category,condition,seed,wer,rel_improvement_vs_global,"
        "n_utts,n_ref_words";
  if (capacity) os << ",sparsity,effective_params";
  if (gradmatch) os << ",val_wer";
  os << "\n";
  for (const auto& r : rows) {
    os << r.experiment << "," << r.category << "," << r.condition << ","
       << r.seed << "," << format_double(r.metrics.wer()) << ",";
    if (r.rel_vs_global) os << format_double(*r.rel_vs_global);
    os << "," << r.metrics.n_utts << "," << r.metrics.n_ref_words;
    if (capacity) {
      os << ",";
      if (r.sparsity) os << format_double(*r.sparsity);
      os << ",";
      if (r.effective_params) os << *r.effective_params;
    }
    if (gradmatch) {
      os << ",";
      if (r.val_wer) os << format_double(*r.val_wer);
    }
    os << "\n";
  }
  return os.str();
}

std::string summarize_to_csv(const std::string& preset,
                             const std::vector<ResultRow>& rows) {
  const bool capacity = preset == "capacity";
  const bool gradmatch = preset == "gradmatch";

  struct Group {
    std::vector<double> wers, rels, val_wers;
    std::optional<long> effective_params;
  };
  std::vector<std::string> order;
  std::map<std::string, Group> groups;
  std::map<std::string, std::tuple<int, std::string, std::string>> keys;
  for (const auto& r : rows) {
    const std::string spars =
        r.sparsity ? format_double(*r.sparsity) : std::string();
    const std::string key = std::to_string(r.category) + "|" + r.condition +
                            "|" + spars;
    if (!groups.count(key)) {
      order.push_back(key);
      keys[key] = {r.category, r.condition, spars};
    }
    Group& g = groups[key];
    g.wers.push_back(r.metrics.wer());
    if (r.rel_vs_global) g.rels.push_back(*r.rel_vs_global);
    if (r.val_wer) g.val_wers.push_back(*r.val_wer);
    if (r.effective_params) g.effective_params = r.effective_params;
  }

  std::ostringstream os;
  os << "experiment,category,condition";
  if (capacity) os << ",sparsity,effective_params";
  os << ",n_seeds,wer_mean,wer_std,rel_mean";
  if (gradmatch) os << ",val_wer_mean";
  os << "\n";
  for (const auto& key : order) {
    const auto& [category, condition, spars] = keys[key];
    const Group& g = groups[key];
    os << preset << "," << category << "," << condition;
    if (capacity) {
      os << "," << spars << ",";
      if (g.effective_params) os << *g.effective_params;
    }
    os << "," << g.wers.size() << "," << format_double(mean(g.wers)) << ","
       << format_double(sample_std(g.wers)) << ",";
    if (!g.rels.empty()) os << format_double(mean(g.rels));
    if (gradmatch) {
      os << ",";
      if (!g.val_wers.empty()) os << format_double(mean(g.val_wers));
    }
    os << "\n";
  }
  return os.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                ExperimentSession* session) {
  config.validate();
  std::optional<ExperimentSession> local;
  if (!session) {
    local.emplace(config);
    session = &*local;
  } else {
    // A shared session must have been built against the same world, model
    // and global-training setup or its cache is meaningless here.
    auto cached_part = [](const ExperimentConfig& c) {
      json j;
      j["world"] = world_to_json(c.world);
      j["model"] = json{{"context_radius", c.model.context_radius},
                        {"hidden", c.model.hidden}};
      j["train_global"] = train_to_json(c.train_global);
      return j.dump();
    };
    if (cached_part(session->config()) != cached_part(config)) {
      throw ConfigError(
          "run_experiment: shared session was built with a different world "
          "or global-training config");
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  PresetOutput out;
  if (config.preset == "table1") {
    out = run_table_preset(config, *session, kTable1Conditions);
  } else if (config.preset == "table2") {
    out = run_table_preset(config, *session, kTable2Conditions);
  } else if (config.preset == "capacity") {
    out = run_capacity_preset(config, *session);
  } else {
    out = run_gradmatch_preset(config, *session);
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  ExperimentResult result;
  result.rows = std::move(out.rows);
  result.results_csv = results_to_csv(config.preset, result.rows);
  result.summary_csv = summarize_to_csv(config.preset, result.rows);
  result.manifest.config_hash = pasr::config_hash(config);
  result.manifest.created = timestamp_utc();
  result.manifest.timings_s.emplace_back("preset/" + config.preset, elapsed);

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const fs::path dir(config.out_dir);
    write_text_file((dir / "results.csv").string(), result.results_csv);
    write_text_file((dir / "summary.csv").string(), result.summary_csv);
    result.manifest.artifacts = {(dir / "results.csv").string(),
                                 (dir / "summary.csv").string()};
    for (const auto& [name, log] : out.selection_logs) {
      const std::string path = (dir / name).string();
      save_selection_log(log, path);
      result.manifest.artifacts.push_back(path);
    }
    write_json_file((dir / "manifest.json").string(),
                    result.manifest.to_json());
  }
  return result;
}

}  // namespace pasr
