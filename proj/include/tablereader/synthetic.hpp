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

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tablereader/network.hpp"
#include "tablereader/preproc.hpp"
#include "tablereader/raster.hpp"
#include "tablereader/training.hpp"

// Generated data for tests, benchmarks and the demo CLI paths: a small
// glyph-word recognition task and a ruled census-style table page.
namespace tablereader::synthetic {

// ----------------------------------------------------------------- toy task

inline constexpr int kToyHeight = 16;

// The ten digit glyphs "0".."9".
const Alphabet& toy_alphabet();

// Renders `word` (digits only) on a white strip kToyHeight pixels high, with
// per-glyph jitter in spacing, baseline and ink level plus pixel noise.
Raster render_toy_word(const std::string& word, std::mt19937_64& rng);

struct ToyOptions {
  int train = 500;
  int validation = 100;
  int dictionary = 50;
  int min_length = 1;
  int max_length = 4;
  std::uint64_t seed = 2014;
};

struct ToyTask {
  std::vector<std::pair<std::string, double>> dictionary;  // (word, count)
  std::vector<training::Sample> train;
  std::vector<training::Sample> validation;
  std::vector<std::string> train_words;
  std::vector<std::string> validation_words;  // drawn from the dictionary
};

ToyTask make_toy_task(const ToyOptions& options = {});

// Small descriptor for the toy task (height 16, every stage kind present).
NetworkSpec toy_network_spec(std::uint64_t seed = 7);

// Height-16 descriptor with two recurrent layers of at most 8 units, used by
// the gradient check.
NetworkSpec desk_spec(StageKind recurrent = StageKind::kLeaky, std::uint64_t seed = 42);

// ---------------------------------------------------------------- table page

struct TableOptions {
  int rows = 50;
  int row_height = 36;
  int top = 60;
  int left = 40;
  std::vector<int> column_widths{360, 200, 100, 80, 300};  // NAME .. BIRTHPLACE
  std::uint64_t seed = 1881;
};

struct TableCell {
  int row = 0;
  FieldType field = FieldType::kName;
  preproc::FieldPolygon polygon;  // approximate, as a layout detector would give
  preproc::Box truth;             // interior between the ruled lines
};

struct TablePage {
  Raster page;
  std::vector<int> row_lines;     // centre rows of the horizontal rules
  std::vector<int> column_lines;  // centre columns of the vertical rules
  std::vector<TableCell> cells;
};

TablePage make_table_page(const TableOptions& options = {});

}  // namespace tablereader::synthetic
