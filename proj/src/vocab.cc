// src/vocab.cc

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

#include "pasr/vocab.hpp"

#include <algorithm>

#include "pasr/common.hpp"

namespace pasr {

Vocabulary::Vocabulary() {
  tokens_.push_back('\0');  // blank, id 0
  for (char c = 'a'; c <= 'z'; ++c) tokens_.push_back(c);
  tokens_.push_back(' ');  // id 27
  std::fill(std::begin(char_to_id_), std::end(char_to_id_), -1);
  for (int i = 1; i < size(); ++i) {
    char_to_id_[static_cast<unsigned char>(tokens_[i])] = i;
  }
}

char Vocabulary::id_to_token(int id) const {
  if (!is_valid_id(id) || id == kBlankId) {
    throw ConfigError("vocabulary: no printable token for id " +
                      std::to_string(id));
  }
  return tokens_[id];
}

int Vocabulary::token_to_id(char token) const {
  int id = char_to_id_[static_cast<unsigned char>(token)];
  if (id < 0) {
    throw ConfigError(std::string("vocabulary: unknown token '") + token +
                      "'");
  }
  return id;
}

std::vector<int> Vocabulary::encode(const std::string& text) const {
  std::vector<int> ids;
  ids.reserve(text.size());
  for (char c : text) ids.push_back(token_to_id(c));
  return ids;
}

std::string Vocabulary::decode(const std::vector<int>& ids) const {
  std::string s;
  s.reserve(ids.size());
  for (int id : ids) s.push_back(id_to_token(id));
  return s;
}

std::vector<std::string> Vocabulary::to_words(
    const std::vector<int>& ids) const {
  std::vector<std::string> words;
  std::string cur;
  for (int id : ids) {
    if (id == kSpaceId) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(id_to_token(id));
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

}  // namespace pasr
