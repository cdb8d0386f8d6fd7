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

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace tablereader {

// The five census columns read by the system. The single-letter codes
// (N, R, A, M, B) name the network type that reads each column.
enum class FieldType { kName, kRelation, kAge, kMarital, kBirthplace };

inline constexpr std::array<FieldType, 5> kAllFieldTypes = {
    FieldType::kName, FieldType::kRelation, FieldType::kAge, FieldType::kMarital,
    FieldType::kBirthplace};

std::string_view to_string(FieldType type);
char type_letter(FieldType type);

// Accepts the upper-case names (NAME, RELATION, AGE, MARITAL, BIRTHPLACE) and
// the single type letters.
std::optional<FieldType> parse_field_type(std::string_view text);

// Network input height: 96 for place of birth, 128 for everything else.
int default_input_height(FieldType type);

}  // namespace tablereader
