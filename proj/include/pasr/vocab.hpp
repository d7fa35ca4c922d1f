// include/pasr/vocab.hpp

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

#ifndef PASR_VOCAB_HPP_
#define PASR_VOCAB_HPP_

#include <string>
#include <vector>

namespace pasr {

// Token inventory: blank (id 0), 'a'..'z' (ids 1..26), space (id 27).
// The two mappings are mutually inverse by construction.
class Vocabulary {
 public:
  static constexpr int kBlankId = 0;
  static constexpr int kSpaceId = 27;
  static constexpr int kNumNonBlank = 27;  // letters + space

  Vocabulary();

  int size() const { return static_cast<int>(tokens_.size()); }  // incl. blank
  char id_to_token(int id) const;
  int token_to_id(char token) const;
  bool is_valid_id(int id) const { return id >= 0 && id < size(); }

  // "cat dog" -> token ids (no blanks).  Throws ConfigError on characters
  // outside the inventory.
  std::vector<int> encode(const std::string& text) const;
  std::string decode(const std::vector<int>& ids) const;

  // decode + split on the space token; empty chunks are dropped.
  std::vector<std::string> to_words(const std::vector<int>& ids) const;

 private:
  std::vector<char> tokens_;
  int char_to_id_[256];
};

}  // namespace pasr

#endif  // PASR_VOCAB_HPP_
