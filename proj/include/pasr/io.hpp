// include/pasr/io.hpp

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

#ifndef PASR_IO_HPP_
#define PASR_IO_HPP_

#include <string>

#include <json.hpp>

#include "pasr/selector.hpp"
#include "pasr/trainer.hpp"
#include "pasr/world.hpp"

namespace pasr {

// Missing or malformed files raise ConfigError with the path in the message.
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

// World files are fully self-contained JSON; loading does not re-run
// generation.
void save_world(const World& world, const std::string& path);
World load_world(const std::string& path);

// Datasets are JSON lines, one utterance per line with fields speaker,
// provenance, transcript (decoded text) and frames.
void save_dataset(const Dataset& dataset, const Vocabulary& vocab,
                  const std::string& path);
Dataset load_dataset(const std::string& path, const Vocabulary& vocab,
                     Split split);

void save_report(const TrainReport& report, const std::string& path);
TrainReport load_report(const std::string& path);

// One JSON line per selection round.
void save_selection_log(const SelectionLog& log, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace pasr

#endif  // PASR_IO_HPP_
