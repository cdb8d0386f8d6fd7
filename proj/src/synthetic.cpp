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

#include "tablereader/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "tablereader/common.hpp"

namespace tablereader::synthetic {

namespace {

// 5x7 digit font, one string per row.
constexpr std::array<std::array<const char*, 7>, 10> kFont = {{
    {" ### ", "#   #", "#  ##", "# # #", "##  #", "#   #", " ### "},
    {"  #  ", " ##  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "},
    {" ### ", "#   #", "    #", "   # ", "  #  ", " #   ", "#####"},
    {"#####", "   # ", "  #  ", "   # ", "    #", "#   #", " ### "},
    {"   # ", "  ## ", " # # ", "#  # ", "#####", "   # ", "   # "},
    {"#####", "#    ", "#### ", "    #", "    #", "#   #", " ### "},
    {"  ## ", " #   ", "#    ", "#### ", "#   #", "#   #", " ### "},
    {"#####", "    #", "   # ", "  #  ", " #   ", " #   ", " #   "},
    {" ### ", "#   #", "#   #", " ### ", "#   #", "#   #", " ### "},
    {" ### ", "#   #", "#   #", " ####", "    #", "   # ", " ##  "},
}};

constexpr int kGlyphW = 10;  // font scaled 2x horizontally
constexpr int kGlyphH = 14;  // and 2x vertically

void stamp(Raster& r, int x0, int y0, int digit, std::uint8_t ink) {
  for (int row = 0; row < kGlyphH; ++row)
    for (int col = 0; col < kGlyphW; ++col) {
      if (kFont[digit][row / 2][col / 2] != '#') continue;
      const int x = x0 + col;
      const int y = y0 + row;
      if (x >= 0 && x < r.width() && y >= 0 && y < r.height()) r.at(x, y) = ink;
    }
}

std::string random_word(std::mt19937_64& rng, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len), digit(0, 9);
  std::string w;
  for (int i = len(rng); i > 0; --i) w.push_back(static_cast<char>('0' + digit(rng)));
  return w;
}

training::Sample sample_of(const std::string& word, std::mt19937_64& rng) {
  return {render_toy_word(word, rng), toy_alphabet().tokenize(word)};
}

}  // namespace

const Alphabet& toy_alphabet() {
  static const Alphabet a({"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"}, "toy");
  return a;
}

Raster render_toy_word(const std::string& word, std::mt19937_64& rng) {
  if (word.empty()) throw Error("render_toy_word: empty word");
  std::uniform_int_distribution<int> gap(2, 5), lead(2, 6), baseline(0, kToyHeight - kGlyphH),
      ink(0, 70);
  std::vector<int> xs;
  int x = lead(rng);
  for (std::size_t i = 0; i < word.size(); ++i) {
    xs.push_back(x);
    x += kGlyphW + gap(rng);
  }
  Raster r(x + lead(rng), kToyHeight, 255);
  for (std::size_t i = 0; i < word.size(); ++i) {
    const char c = word[i];
    if (c < '0' || c > '9') throw FormatError(std::string("render_toy_word: '") + c + "' is not a digit");
    stamp(r, xs[i], baseline(rng), c - '0', static_cast<std::uint8_t>(ink(rng)));
  }
  std::normal_distribution<double> noise(0.0, 12.0);
  for (auto& p : r.pixels())
    p = static_cast<std::uint8_t>(std::clamp(std::lround(p + noise(rng)), 0L, 255L));
  return r;
}

ToyTask make_toy_task(const ToyOptions& options) {
  std::mt19937_64 rng(options.seed);
  ToyTask task;
  std::set<std::string> seen;
  std::uniform_int_distribution<int> count(1, 20);
  while (static_cast<int>(seen.size()) < options.dictionary) {
    std::string w = random_word(rng, options.min_length, options.max_length);
    if (seen.insert(w).second) task.dictionary.emplace_back(w, count(rng));
  }
  for (int i = 0; i < options.train; ++i) {
    task.train_words.push_back(random_word(rng, options.min_length, options.max_length));
    task.train.push_back(sample_of(task.train_words.back(), rng));
  }
  std::uniform_int_distribution<std::size_t> pick(0, task.dictionary.size() - 1);
  for (int i = 0; i < options.validation; ++i) {
    task.validation_words.push_back(task.dictionary[pick(rng)].first);
    task.validation.push_back(sample_of(task.validation_words.back(), rng));
  }
  return task;
}

NetworkSpec toy_network_spec(std::uint64_t seed) {
  NetworkSpec spec;
  spec.name = "toy";
  spec.input_height = kToyHeight;
  spec.gabor = GaborBank{{0.0, 45.0, 90.0, 135.0}, 4.0, 2.0, 5};
  // A single recurrent layer near the output: deeper stacks train fine from
  // most sample orders but occasionally stall on the all-blank plateau.
  spec.stages = {{StageKind::kSubsample, 16, 4, 2}, {StageKind::kTanh, 16, 1, 1},
                 {StageKind::kSubsample, 32, 4, 1}, {StageKind::kLeaky, 24, 1, 1},
                 {StageKind::kCollapse, 0, 1, 1},   {StageKind::kSoftmax, 0, 1, 1}};
  spec.alphabet = toy_alphabet();
  spec.seed = seed;
  return spec;
}

NetworkSpec desk_spec(StageKind recurrent, std::uint64_t seed) {
  NetworkSpec spec;
  spec.name = "desk";
  spec.input_height = 16;
  spec.gabor = GaborBank{{0.0, 45.0, 90.0, 135.0}, 4.0, 2.0, 5};
  spec.stages = {{StageKind::kSubsample, 6, 4, 3}, {recurrent, 5, 1, 1},
                 {StageKind::kSubsample, 8, 4, 3}, {StageKind::kTanh, 6, 1, 1},
                 {recurrent, 4, 1, 1},                {StageKind::kCollapse, 0, 1, 1},
                 {StageKind::kSoftmax, 0, 1, 1}};
  spec.alphabet = Alphabet({"a", "b", "c", "d"}, "desk");
  spec.seed = seed;
  return spec;
}

TablePage make_table_page(const TableOptions& o) {
  if (o.rows < 1 || o.column_widths.size() != kAllFieldTypes.size())
    throw Error("make_table_page: need >= 1 row and one width per field type");
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> thick(2, 4), rule_ink(0, 60), jitter(-2, 2), slop(-4, 4);

  TablePage t;
  int x = o.left;
  t.column_lines.push_back(x);
  for (int w : o.column_widths) t.column_lines.push_back(x += w);
  int y = o.top;
  t.row_lines.push_back(y);
  for (int r = 0; r < o.rows; ++r) t.row_lines.push_back(y += o.row_height + jitter(rng));

  t.page = Raster(t.column_lines.back() + o.left, t.row_lines.back() + o.top, 255);
  const int x0 = t.column_lines.front();
  const int x1 = t.column_lines.back();
  const int y0 = t.row_lines.front();
  const int y1 = t.row_lines.back();

  // Rules are drawn centred on their nominal coordinate.
  auto hrule = [&](int yc) {
    const int th = thick(rng);
    const auto ink = static_cast<std::uint8_t>(rule_ink(rng));
    for (int yy = yc - (th - 1) / 2; yy <= yc + th / 2; ++yy)
      for (int xx = x0 - 1; xx <= x1 + 1; ++xx) t.page.at(xx, yy) = ink;
    return std::pair{yc - (th - 1) / 2, yc + th / 2};
  };
  auto vrule = [&](int xc) {
    const int th = thick(rng);
    const auto ink = static_cast<std::uint8_t>(rule_ink(rng));
    for (int xx = xc - (th - 1) / 2; xx <= xc + th / 2; ++xx)
      for (int yy = y0 - 1; yy <= y1 + 1; ++yy) t.page.at(xx, yy) = ink;
    return std::pair{xc - (th - 1) / 2, xc + th / 2};
  };
  std::vector<std::pair<int, int>> hs, vs;
  for (int yc : t.row_lines) hs.push_back(hrule(yc));
  for (int xc : t.column_lines) vs.push_back(vrule(xc));

  // Handwriting stand-in: digit strings inside each cell, clear of the rules.
  std::uniform_int_distribution<int> ink(0, 80);
  for (int r = 0; r < o.rows; ++r) {
    for (std::size_t c = 0; c < kAllFieldTypes.size(); ++c) {
      TableCell cell;
      cell.row = r;
      cell.field = kAllFieldTypes[c];
      cell.truth = {vs[c].second + 1, hs[r].second + 1, vs[c + 1].first - 1, hs[r + 1].first - 1};
      const int inner_w = cell.truth.right - cell.truth.left + 1;
      const int glyphs = std::clamp((inner_w - 8) / (kGlyphW + 3), 1, 12);
      std::uniform_int_distribution<int> n(1, glyphs), digit(0, 9);
      int gx = cell.truth.left + 4;
      const int gy = cell.truth.top + (cell.truth.bottom - cell.truth.top + 1 - kGlyphH) / 2;
      for (int g = n(rng); g > 0; --g, gx += kGlyphW + 3)
        stamp(t.page, gx, gy, digit(rng), static_cast<std::uint8_t>(ink(rng)));

      // Approximate polygon: the true interior with a few pixels of slop.
      const auto& b = cell.truth;
      cell.polygon.field_type = cell.field;
      cell.polygon.vertices = {{b.left + slop(rng), b.top + slop(rng)},
                               {b.right + slop(rng), b.top + slop(rng)},
                               {b.right + slop(rng), b.bottom + slop(rng)},
                               {b.left + slop(rng), b.bottom + slop(rng)}};
      t.cells.push_back(std::move(cell));
    }
  }
  return t;
}

}  // namespace tablereader::synthetic
