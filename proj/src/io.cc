// src/io.cc

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

#include "pasr/io.hpp"

#include <fstream>
#include <sstream>

namespace pasr {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("json: expected a non-empty matrix");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) {
      throw ConfigError("json: ragged matrix rows");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

json style_to_json(const SpeakerStyle& s) {
  return json{{"transform", matrix_to_json(s.transform)},
              {"offset", vector_to_json(s.offset)},
              {"tempo", s.tempo},
              {"tempo_jitter", s.tempo_jitter},
              {"noise_sigma", s.noise_sigma}};
}

SpeakerStyle style_from_json(const json& j) {
  SpeakerStyle s;
  s.transform = matrix_from_json(j.at("transform"));
  s.offset = vector_from_json(j.at("offset"));
  s.tempo = j.at("tempo").get<double>();
  s.tempo_jitter = j.at("tempo_jitter").get<double>();
  s.noise_sigma = j.at("noise_sigma").get<double>();
  return s;
}

json domain_to_json(const TextDomain& d) {
  return json{{"words", d.words},
              {"weights", d.weights},
              {"min_words", d.min_words},
              {"max_words", d.max_words}};
}

TextDomain domain_from_json(const json& j) {
  TextDomain d;
  d.words = j.at("words").get<std::vector<std::string>>();
  d.weights = j.at("weights").get<std::vector<double>>();
  d.min_words = j.at("min_words").get<int>();
  d.max_words = j.at("max_words").get<int>();
  return d;
}

json speaker_to_json(const SpeakerSpec& s) {
  return json{{"id", s.id},
              {"category", s.category},
              {"style", style_to_json(s.style)},
              {"domain", domain_to_json(s.domain)}};
}

SpeakerSpec speaker_from_json(const json& j) {
  SpeakerSpec s;
  s.id = j.at("id").get<std::string>();
  s.category = j.at("category").get<int>();
  s.style = style_from_json(j.at("style"));
  s.domain = domain_from_json(j.at("domain"));
  return s;
}

json world_config_to_json(const WorldConfig& c) {
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

template <typename T>
void read_field(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

WorldConfig world_config_from_json(const json& j) {
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

}  // namespace

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

void save_world(const World& world, const std::string& path) {
  json j;
  j["seed"] = world.seed;
  j["config"] = world_config_to_json(world.config);
  j["bank"] = json{{"dim", world.bank.dim},
                   {"seed", world.bank.seed},
                   {"prototypes", matrix_to_json(world.bank.prototypes)}};
  j["global_domain"] = domain_to_json(world.global_domain);
  json pool = json::array();
  for (const auto& s : world.global_pool) pool.push_back(speaker_to_json(s));
  j["global_pool"] = std::move(pool);
  json targets = json::array();
  for (const auto& s : world.targets) targets.push_back(speaker_to_json(s));
  j["targets"] = std::move(targets);
  write_json_file(path, j);
}

World load_world(const std::string& path) {
  const json j = read_json_file(path);
  try {
    World w;
    w.seed = j.at("seed").get<std::uint64_t>();
    w.config = world_config_from_json(j.at("config"));
    w.config.validate();
    const json& bank = j.at("bank");
    w.bank.dim = bank.at("dim").get<int>();
    w.bank.seed = bank.at("seed").get<std::uint64_t>();
    w.bank.prototypes = matrix_from_json(bank.at("prototypes"));
    w.global_domain = domain_from_json(j.at("global_domain"));
    for (const json& s : j.at("global_pool")) {
      w.global_pool.push_back(speaker_from_json(s));
    }
    for (const json& s : j.at("targets")) {
      w.targets.push_back(speaker_from_json(s));
    }
    return w;
  } catch (const json::exception& e) {
    throw ConfigError("world file '" + path + "' malformed: " + e.what());
  }
}

void save_dataset(const Dataset& dataset, const Vocabulary& vocab,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  for (const auto& u : dataset.utts) {
    json j{{"speaker", u.speaker},
           {"provenance", to_string(u.provenance)},
           {"transcript", vocab.decode(u.transcript)},
           {"frames", matrix_to_json(u.frames)}};
    out << j.dump() << "\n";
  }
}

Dataset load_dataset(const std::string& path, const Vocabulary& vocab,
                     Split split) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  Dataset d;
  d.split = split;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      Utterance u;
      u.speaker = j.at("speaker").get<std::string>();
      u.provenance = provenance_from_string(j.at("provenance").get<std::string>());
      u.transcript = vocab.encode(j.at("transcript").get<std::string>());
      u.frames = matrix_from_json(j.at("frames"));
      d.utts.push_back(std::move(u));
    } catch (const json::exception& e) {
      throw ConfigError("dataset '" + path + "' line " +
                        std::to_string(lineno) + ": " + e.what());
    }
  }
  return d;
}

void save_report(const TrainReport& report, const std::string& path) {
  write_json_file(path, json{{"train_loss", report.train_loss},
                             {"val_wer", report.val_wer},
                             {"best_epoch", report.best_epoch}});
}

TrainReport load_report(const std::string& path) {
  const json j = read_json_file(path);
  try {
    TrainReport r;
    r.train_loss = j.at("train_loss").get<std::vector<double>>();
    r.val_wer = j.at("val_wer").get<std::vector<double>>();
    r.best_epoch = j.at("best_epoch").get<int>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError("report '" + path + "' malformed: " + e.what());
  }
}

void save_selection_log(const SelectionLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  for (const auto& round : log) {
    json j{{"round", round.round},
           {"epoch", round.epoch},
           {"k", round.k},
           {"scores", round.scores},
           {"selected", round.selected}};
    out << j.dump() << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pasr
