// Copyright 2026 The TableReader Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tablereader/field_type.hpp"

namespace tablereader {

using LabelSequence = std::vector<int>;

// Ordered task symbols plus one artificial garbage symbol, which doubles as
// the CTC blank. The garbage symbol always takes the last index, so task
// symbol i keeps index i.
//
// Symbols are strings because some are multi-character tokens (the age
// fractions "0/12" ... "12/12" are single output classes).
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols, std::string name = {});

  const std::string& name() const { return name_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  // Task symbols + garbage.
  int size() const { return static_cast<int>(symbols_.size()) + 1; }
  int garbage_index() const { return static_cast<int>(symbols_.size()); }

  // -1 when absent.
  int index_of(std::string_view token) const;

  // Greedy longest-match split of UTF-8 text into symbol indices. Throws
  // FormatError naming the first character that matches no symbol.
  LabelSequence tokenize(std::string_view text) const;
  bool accepts(std::string_view text) const;

  std::string render(const LabelSequence& labels) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::string name_;
  std::vector<std::string> symbols_;
  std::size_t longest_ = 0;
};

// The shipped output alphabets, one per field type.
const Alphabet& field_alphabet(FieldType type);

}  // namespace tablereader
