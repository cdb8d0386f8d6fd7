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

#include "tablereader/alphabet.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tablereader/common.hpp"

namespace tablereader {

Alphabet::Alphabet(std::vector<std::string> symbols, std::string name)
    : name_(std::move(name)), symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw FormatError("alphabet symbols must be non-empty");
    if (!seen.insert(s).second) throw FormatError("duplicate alphabet symbol '" + s + "'");
    longest_ = std::max(longest_, s.size());
  }
}

int Alphabet::index_of(std::string_view token) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), token);
  return it == symbols_.end() ? -1 : static_cast<int>(it - symbols_.begin());
}

LabelSequence Alphabet::tokenize(std::string_view text) const {
  LabelSequence labels;
  std::size_t pos = 0;
  while (pos < text.size()) {
    int found = -1;
    std::size_t found_len = 0;
    for (std::size_t len = std::min(longest_, text.size() - pos); len > 0; --len) {
      int idx = index_of(text.substr(pos, len));
      if (idx >= 0) {
        found = idx;
        found_len = len;
        break;
      }
    }
    if (found < 0) {
      // Report the whole UTF-8 code point.
      std::size_t len = 1;
      auto lead = static_cast<unsigned char>(text[pos]);
      if (lead >= 0xF0) len = 4;
      else if (lead >= 0xE0) len = 3;
      else if (lead >= 0xC0) len = 2;
      throw FormatError("character '" + std::string(text.substr(pos, len)) +
                        "' is not in the " + (name_.empty() ? "" : name_ + " ") +
                        "alphabet");
    }
    labels.push_back(found);
    pos += found_len;
  }
  return labels;
}

bool Alphabet::accepts(std::string_view text) const {
  try {
    tokenize(text);
    return true;
  } catch (const FormatError&) {
    return false;
  }
}

std::string Alphabet::render(const LabelSequence& labels) const {
  std::string out;
  for (int l : labels) {
    if (l < 0 || l >= static_cast<int>(symbols_.size()))
      throw Error("label index outside the task alphabet");
    out += symbols_[l];
  }
  return out;
}

namespace {

std::vector<std::string> letters() {
  std::vector<std::string> out;
  for (char c = 'A'; c <= 'Z'; ++c) out.emplace_back(1, c);
  for (char c = 'a'; c <= 'z'; ++c) out.emplace_back(1, c);
  return out;
}

std::vector<std::string> with_letters(std::vector<std::string> head) {
  auto tail = letters();
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

Alphabet make(FieldType type) {
  switch (type) {
    case FieldType::kName:
      return Alphabet(with_letters({" ", "'", "_"}), "NAME");
    case FieldType::kRelation:
      return Alphabet(with_letters({" ", "-", "_"}), "RELATION");
    case FieldType::kAge: {
      std::vector<std::string> s{" "};
      for (char c = '0'; c <= '9'; ++c) s.emplace_back(1, c);
      for (int n = 0; n <= 12; ++n) s.push_back(std::to_string(n) + "/12");
      return Alphabet(std::move(s), "AGE");
    }
    case FieldType::kMarital:
      return Alphabet({"S", "M", "W", "D", "C", "V"}, "MARITAL");
    case FieldType::kBirthplace:
      return Alphabet(with_letters({" ", "-"}), "BIRTHPLACE");
  }
  throw Error("unknown field type");
}

}  // namespace

const Alphabet& field_alphabet(FieldType type) {
  static const std::map<FieldType, Alphabet> catalog = [] {
    std::map<FieldType, Alphabet> m;
    for (FieldType t : kAllFieldTypes) m.emplace(t, make(t));
    return m;
  }();
  return catalog.at(type);
}

}  // namespace tablereader
