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

#include "tablereader/decode_config.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "tablereader/common.hpp"

namespace tablereader::decode {

using nlohmann::json;

namespace {

DecodeParams params_of(const json& j) {
  DecodeParams p{j.at("alpha").get<double>(), j.at("beta").get<double>()};
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || p.alpha < 0 || p.beta < 0)
    throw FormatError("decoding weights must be finite and non-negative");
  return p;
}

}  // namespace

DecodingTable DecodingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open decoding table " + path.string());
  DecodingTable table;
  try {
    const json doc = json::parse(in);
    for (const auto& [key, f] : doc.at("fields").items()) {
      const auto type = parse_field_type(key);
      if (!type) throw FormatError("unknown field '" + key + "'");
      FieldDecodeConfig cfg;
      for (const auto& n : f.at("networks")) {
        std::filesystem::path p = n.get<std::string>();
        cfg.networks.push_back(p.is_relative() ? path.parent_path() / p : p);
      }
      if (cfg.networks.empty()) throw FormatError(key + ": empty committee");
      if (*type == FieldType::kName) {
        cfg.params = params_of(f.at("family"));
        cfg.given = params_of(f.at("given"));
      } else {
        cfg.params = params_of(f);
      }
      table.fields[*type] = std::move(cfg);
    }
    if (doc.contains("grid")) {
      table.alpha_grid = doc.at("grid").at("alpha").get<std::vector<double>>();
      table.beta_grid = doc.at("grid").at("beta").get<std::vector<double>>();
    }
    table.name_cap = doc.value("name_cap", table.name_cap);
    if (doc.contains("consistency")) {
      table.penalty = doc.at("consistency").value("penalty", table.penalty);
      table.margin = doc.at("consistency").value("margin", table.margin);
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return table;
}

DecodingTable DecodingTable::defaults() {
  DecodingTable t;
  auto set = [&](FieldType f, std::size_t size, DecodeParams p,
                 std::optional<DecodeParams> given = std::nullopt) {
    FieldDecodeConfig c;
    c.size = size;
    c.params = p;
    c.given = given;
    t.fields[f] = c;
  };
  set(FieldType::kName, 3, {0.50, 0.50}, DecodeParams{0.25, 0.25});
  set(FieldType::kRelation, 2, {1.00, 0.00});
  set(FieldType::kAge, 1, {0.75, 0.25});
  set(FieldType::kMarital, 1, {0.75, 0.25});
  set(FieldType::kBirthplace, 2, {1.00, 0.00});
  return t;
}

const FieldDecodeConfig& DecodingTable::at(FieldType type) const {
  const auto it = fields.find(type);
  if (it == fields.end())
    throw Error("no decoding configuration for " + std::string(to_string(type)));
  return it->second;
}

NameDecodeParams DecodingTable::name_params() const {
  const auto& n = at(FieldType::kName);
  NameDecodeParams p;
  p.family = n.params;
  p.given = n.given.value_or(n.params);
  p.cap = name_cap;
  return p;
}

}  // namespace tablereader::decode
