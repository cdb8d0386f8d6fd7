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

#include "tablereader/field_type.hpp"

namespace tablereader {

std::string_view to_string(FieldType type) {
  switch (type) {
    case FieldType::kName: return "NAME";
    case FieldType::kRelation: return "RELATION";
    case FieldType::kAge: return "AGE";
    case FieldType::kMarital: return "MARITAL";
    case FieldType::kBirthplace: return "BIRTHPLACE";
  }
  return "?";
}

char type_letter(FieldType type) {
  switch (type) {
    case FieldType::kName: return 'N';
    case FieldType::kRelation: return 'R';
    case FieldType::kAge: return 'A';
    case FieldType::kMarital: return 'M';
    case FieldType::kBirthplace: return 'B';
  }
  return '?';
}

std::optional<FieldType> parse_field_type(std::string_view text) {
  for (FieldType type : kAllFieldTypes) {
    if (text == to_string(type)) return type;
    if (text.size() == 1 && text[0] == type_letter(type)) return type;
  }
  return std::nullopt;
}

int default_input_height(FieldType type) {
  return type == FieldType::kBirthplace ? 96 : 128;
}

}  // namespace tablereader
