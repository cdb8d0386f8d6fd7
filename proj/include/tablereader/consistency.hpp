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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tablereader/decode.hpp"

namespace tablereader::consistency {

// Row field keys used by the rules.
inline constexpr const char* kFamilyField = "NAME_FAMILY";
inline constexpr const char* kGivenField = "NAME_GIVEN";
inline constexpr const char* kRelationField = "RELATION";
inline constexpr const char* kAutoTarget = "auto";

inline constexpr double kDefaultPenalty = 2.0;
inline constexpr double kDefaultMargin = 1.0;

struct FieldAnswers {
  std::vector<decode::ScoredWord> alternatives;  // ascending cost (decode::better)
  std::size_t selected = 0;

  const decode::ScoredWord& current() const { return alternatives.at(selected); }
  bool operator==(const FieldAnswers&) const = default;
};

struct Row {
  std::string id;
  std::map<std::string, FieldAnswers> fields;
  bool operator==(const Row&) const = default;
};

// First-name gender lexicon, "name<TAB>m|f". Lookups are ASCII
// case-insensitive.
class GenderLexicon {
 public:
  static GenderLexicon load(const std::filesystem::path& path);
  void add(std::string_view name, char gender);
  // Gender of the first whitespace-separated word of `given`, if known.
  std::optional<char> gender(std::string_view given) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::map<std::string, char> names_;
};

struct ConsistencyRule {
  std::string id;
  std::string relation_value;  // compared ASCII case-insensitively
  char required_gender = 'f';
  std::string target = kAutoTarget;  // kGivenField, kRelationField or kAutoTarget
  double penalty = kDefaultPenalty;  // delta
  double margin = kDefaultMargin;    // gamma

  bool operator==(const ConsistencyRule&) const = default;
};

// "id<TAB>relation<TAB>gender<TAB>target<TAB>delta<TAB>gamma"; the last two
// columns may be omitted for the defaults.
std::vector<ConsistencyRule> load_rules(const std::filesystem::path& path);

// True when `rule` contradicts the row's current answers.
bool fires(const ConsistencyRule& rule, const Row& row, const GenderLexicon& lexicon);

struct Event {
  std::string rule_id;
  std::string row_id;
  std::string field;
  bool switched = false;
  std::string from;
  std::string to;       // == from when kept
  double penalized = 0; // current cost + delta
};

struct Outcome {
  Row row;
  std::vector<Event> log;
};

// Rules run in id order. A fired rule penalizes the target field's current
// answer by delta and switches to the first alternative that resolves the
// conflict if it beats the penalized cost and lies within gamma of the
// original cost; otherwise the answer is kept and the penalty only logged.
Outcome apply_consistency(const Row& row, std::vector<ConsistencyRule> rules,
                          const GenderLexicon& lexicon);

}  // namespace tablereader::consistency
