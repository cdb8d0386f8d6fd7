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
#include <string>
#include <string_view>
#include <vector>

#include "tablereader/field_type.hpp"

namespace tablereader {

// Canonical transcript: surrounding whitespace trimmed, inner runs collapsed
// to one space, NAME ditto marks "=" rewritten to "_", then validated against
// the field alphabet (FormatError naming the offending character).
std::string gt_normalize(FieldType type, std::string_view raw);

// One field answer or reference, as written by `decode`.
struct Answer {
  std::string row_id;
  FieldType field = FieldType::kName;
  std::string text;
  bool operator==(const Answer&) const = default;
};

// "row_id<TAB>field<TAB>text[<TAB>...]" lines, '#' comments.
std::vector<Answer> read_answers(const std::filesystem::path& path);

struct FieldAccuracy {
  int evaluated = 0;
  int correct = 0;
  double accuracy() const { return evaluated == 0 ? 0.0 : static_cast<double>(correct) / evaluated; }
};

struct EvalReport {
  std::map<FieldType, FieldAccuracy> per_field;
  FieldAccuracy overall;
  int skipped = 0;  // references that fail gt_normalize
  int missing = 0;  // evaluated references without a prediction (count as wrong)
};

// Exact match after gt_normalize on both sides. References are matched to
// predictions by (row_id, field); evaluated + skipped == references.size().
EvalReport evaluate(const std::vector<Answer>& predictions, const std::vector<Answer>& references);

std::string format_report(const EvalReport& report);

}  // namespace tablereader
