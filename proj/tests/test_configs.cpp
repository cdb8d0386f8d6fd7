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

#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "tablereader/decode_config.hpp"
#include "tablereader/network.hpp"
#include "tablereader/training.hpp"

using namespace tablereader;

namespace {

const std::filesystem::path kConfigs = TABLEREADER_CONFIG_DIR;

struct Row {
  int weights;
  int outputs;
  int main_epochs;
  int post_epochs;
};

// Published architecture sizes and training schedules.
const std::map<std::string, Row> kTable = {
    {"N1", {958387, 56, 31, 8}},   {"N2", {363477, 56, 54, 8}},   {"N3", {363477, 56, 60, 9}},
    {"R1", {1006387, 56, 100, 7}}, {"R2", {1006387, 56, 100, 10}}, {"A", {933556, 25, 100, 6}},
    {"M", {967138, 7, 100, 9}},    {"B1", {1005586, 55, 67, 8}},  {"B2", {655747, 55, 99, 8}}};

}  // namespace

TEST_CASE("shipped network descriptors") {
  for (const auto& [name, row] : kTable) {
    CAPTURE(name);
    const auto path = kConfigs / "networks" / (name + ".json");
    const auto spec = NetworkSpec::load(path.string());
    const Network net(spec);
    CHECK(net.output_neurons() == row.outputs);
    const double rel = std::abs(static_cast<double>(net.trainable_count()) - row.weights) / row.weights;
    CHECK(rel <= 0.02);
    CHECK(spec.input_height == default_input_height(*spec.field_type));
    std::ifstream in(path);
    const auto cfg = training::TrainConfig::from_json(nlohmann::json::parse(in).at("training"));
    cfg.validate();
    CHECK(cfg.main_epochs == row.main_epochs);
    CHECK(cfg.post_epochs == row.post_epochs);
    CHECK(cfg.momentum == 0.9);
    CHECK(cfg.main_lr == 0.002);
    CHECK(cfg.post_lr == 0.001);
    CHECK(cfg.samples_per_epoch == 20000);
  }
}

TEST_CASE("shipped decoding table") {
  const auto t = decode::DecodingTable::load(kConfigs / "decoding.json");
  using decode::DecodeParams;
  CHECK(t.at(FieldType::kName).committee_size() == 3);
  CHECK(t.at(FieldType::kName).params == DecodeParams{0.50, 0.50});
  CHECK(t.at(FieldType::kName).given == DecodeParams{0.25, 0.25});
  CHECK(t.at(FieldType::kRelation).committee_size() == 2);
  CHECK(t.at(FieldType::kRelation).params == DecodeParams{1.00, 0.00});
  CHECK(t.at(FieldType::kAge).committee_size() == 1);
  CHECK(t.at(FieldType::kAge).params == DecodeParams{0.75, 0.25});
  CHECK(t.at(FieldType::kMarital).committee_size() == 1);
  CHECK(t.at(FieldType::kMarital).params == DecodeParams{0.75, 0.25});
  CHECK(t.at(FieldType::kBirthplace).committee_size() == 2);
  CHECK(t.at(FieldType::kBirthplace).params == DecodeParams{1.00, 0.00});
  CHECK(t.alpha_grid == decode::default_alpha_grid());
  CHECK(t.beta_grid == decode::default_beta_grid());
  for (const auto& [type, f] : t.fields)
    for (const auto& n : f.networks) {
      CHECK(std::filesystem::exists(n));
      CHECK(NetworkSpec::load(n.string()).field_type == type);
    }
}

TEST_CASE("built-in decoding defaults agree with the shipped table") {
  const auto file = decode::DecodingTable::load(kConfigs / "decoding.json");
  const auto def = decode::DecodingTable::defaults();
  for (FieldType f : kAllFieldTypes) {
    CAPTURE(to_string(f));
    CHECK(def.at(f).params == file.at(f).params);
    CHECK(def.at(f).given == file.at(f).given);
    CHECK(def.at(f).committee_size() == file.at(f).committee_size());
  }
  CHECK(def.name_params().family == decode::DecodeParams{0.50, 0.50});
  CHECK(def.name_params().given == decode::DecodeParams{0.25, 0.25});
}
