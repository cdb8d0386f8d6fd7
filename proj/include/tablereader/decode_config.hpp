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
#include <vector>

#include "tablereader/decode.hpp"
#include "tablereader/field_type.hpp"

namespace tablereader::decode {

struct FieldDecodeConfig {
  std::vector<std::filesystem::path> networks;  // committee members (descriptor paths)
  DecodeParams params;                          // NAME: the family-name part
  std::optional<DecodeParams> given;            // NAME only

  std::size_t committee_size() const { return networks.empty() ? size : networks.size(); }
  std::size_t size = 0;  // committee size when no paths are attached
};

// Per-field committees and decoding weights, plus the search grids and the
// consistency defaults.
struct DecodingTable {
  std::map<FieldType, FieldDecodeConfig> fields;
  std::vector<double> alpha_grid = default_alpha_grid();
  std::vector<double> beta_grid = default_beta_grid();
  std::size_t name_cap = 200;
  double penalty = 2.0;
  double margin = 1.0;

  // Relative network paths are resolved against the file's directory.
  static DecodingTable load(const std::filesystem::path& path);
  // The published per-field weights and committee sizes without network
  // paths; used when no table file is given.
  static DecodingTable defaults();
  const FieldDecodeConfig& at(FieldType type) const;
  NameDecodeParams name_params() const;
};

}  // namespace tablereader::decode
